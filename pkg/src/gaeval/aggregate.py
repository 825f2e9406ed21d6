"""Corpus-level WER/CER and seeded bootstrap confidence intervals.

Scores are global: integer S, I, D and reference-token counts are summed over
all utterances and divided once, as ``100.0 * count / total``.  Per-utterance
ratios are never averaged.

Bootstrap: utterances are put in canonical order (by sample id, then counts),
resample ``b`` (1-based) draws ``len(pairs)`` indices from the SplitMix64
substream ``(seed, b)`` (see :mod:`gaeval.rng`).  A draw whose reference total
is zero is replaced by the next ``len(pairs)`` indices of the same substream
and counted as a redraw.  Bounds are the nearest-rank 2.5th and 97.5th
percentiles of the resample statistics.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .align import AlignedPair, ErrorCounts
from .rng import IndexStream

__all__ = [
    "Metric",
    "AggregateError",
    "GlobalScore",
    "BootstrapCI",
    "aggregate",
    "bootstrap_ci",
    "nearest_rank",
    "canonical_order",
    "DEFAULT_RESAMPLES",
    "DEFAULT_SEED",
]

DEFAULT_RESAMPLES = 1000
DEFAULT_SEED = 42
CI_LEVEL = 0.95
# safety valve for corpora where nearly every utterance has an empty reference
MAX_REDRAWS_PER_RESAMPLE = 10_000


class Metric(str, enum.Enum):
    WER = "wer"
    CER = "cer"


class AggregateError(ValueError):
    """Global score is undefined: no utterances, or no reference tokens."""


def pct(count: int, total: int) -> float:
    return 100.0 * count / total


@dataclass(frozen=True)
class GlobalScore:
    wer_pct: float
    cer_pct: float
    sub_pct: float
    ins_pct: float
    del_pct: float
    total_ref_words: int
    total_ref_chars: int
    utterance_count: int
    word_totals: ErrorCounts
    char_totals: ErrorCounts

    @classmethod
    def from_totals(cls, words: ErrorCounts, chars: ErrorCounts, utterance_count: int) -> "GlobalScore":
        if utterance_count < 1:
            raise AggregateError("no utterances to aggregate")
        if words.n_ref == 0:
            raise AggregateError("corpus has no reference words; check the manifest")
        return cls(
            wer_pct=pct(words.errors, words.n_ref),
            cer_pct=pct(chars.errors, chars.n_ref),
            sub_pct=pct(words.sub, words.n_ref),
            ins_pct=pct(words.ins, words.n_ref),
            del_pct=pct(words.del_, words.n_ref),
            total_ref_words=words.n_ref,
            total_ref_chars=chars.n_ref,
            utterance_count=utterance_count,
            word_totals=words,
            char_totals=chars,
        )


@dataclass(frozen=True)
class BootstrapCI:
    metric: Metric
    low_pct: float
    high_pct: float
    resamples: int = DEFAULT_RESAMPLES
    seed: int = DEFAULT_SEED
    method: str = "percentile"
    redraws: int = 0

    @property
    def width(self) -> float:
        return self.high_pct - self.low_pct

    def to_dict(self) -> dict:
        return {
            "low": self.low_pct,
            "high": self.high_pct,
            "resamples": self.resamples,
            "seed": self.seed,
            "method": self.method,
            "redraws": self.redraws,
        }

    @classmethod
    def from_dict(cls, metric: Metric | str, d: dict) -> "BootstrapCI":
        return cls(Metric(metric), d["low"], d["high"], d["resamples"], d["seed"], d["method"], d.get("redraws", 0))


def _sum_counts(counts: Sequence[ErrorCounts]) -> ErrorCounts:
    sub = ins = del_ = n = 0
    for c in counts:
        sub += c.sub
        ins += c.ins
        del_ += c.del_
        n += c.n_ref
    return ErrorCounts(sub, ins, del_, n)


def aggregate(pairs: Sequence[AlignedPair]) -> GlobalScore:
    if not pairs:
        raise AggregateError("no utterances to aggregate")
    return GlobalScore.from_totals(
        _sum_counts([p.word_counts for p in pairs]),
        _sum_counts([p.char_counts for p in pairs]),
        len(pairs),
    )


def canonical_order(pairs: Sequence[AlignedPair]) -> list[AlignedPair]:
    return sorted(pairs, key=lambda p: (p.sample_id, p.word_counts.as_tuple(), p.char_counts.as_tuple()))


def nearest_rank(sorted_values: Sequence[float], q: float) -> float:
    """Nearest-rank percentile: the ``ceil(q * N)``-th smallest value (1-based)."""
    n = len(sorted_values)
    rank = max(1, math.ceil(round(q * n, 9)))
    return sorted_values[min(rank, n) - 1]


def _resample_stats(errors: np.ndarray, n_ref: np.ndarray, seed: int, bs: range) -> tuple[list[float], int]:
    n = len(errors)
    stats = []
    redraws = 0
    for b in bs:
        stream = IndexStream(seed, b, n)
        for _ in range(MAX_REDRAWS_PER_RESAMPLE):
            idx = stream.take(n)
            total = int(n_ref[idx].sum())
            if total > 0:
                break
            redraws += 1
        else:
            raise AggregateError(f"resample {b}: no draw with reference tokens after {MAX_REDRAWS_PER_RESAMPLE} tries")
        stats.append(pct(int(errors[idx].sum()), total))
    return stats, redraws


def bootstrap_ci(
    pairs: Sequence[AlignedPair],
    metric: Metric | str = Metric.WER,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> BootstrapCI:
    """Percentile bootstrap 95% interval of the global WER or CER.

    Whole utterances are resampled, so an utterance's errors and reference
    length move together.  The result depends only on the multiset of pairs,
    ``resamples`` and ``seed``; ``workers`` only splits the resample range.
    """
    metric = Metric(metric)
    if not pairs:
        raise AggregateError("no utterances to resample")
    if resamples < 1:
        raise ValueError("resamples must be at least 1")
    ordered = canonical_order(pairs)
    counts = [p.word_counts if metric is Metric.WER else p.char_counts for p in ordered]
    errors = np.array([c.errors for c in counts], dtype=np.int64)
    n_ref = np.array([c.n_ref for c in counts], dtype=np.int64)
    if not n_ref.any():
        raise AggregateError("every utterance has an empty reference")

    bs = range(1, resamples + 1)
    workers = max(1, min(workers, resamples))
    if workers == 1:
        stats, redraws = _resample_stats(errors, n_ref, seed, bs)
    else:
        step = math.ceil(resamples / workers)
        chunks = [bs[i:i + step] for i in range(0, resamples, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _resample_stats(errors, n_ref, seed, c), chunks))
        stats = [s for part, _ in parts for s in part]
        redraws = sum(r for _, r in parts)

    stats.sort()
    alpha = (1.0 - CI_LEVEL) / 2
    return BootstrapCI(
        metric,
        nearest_rank(stats, alpha),
        nearest_rank(stats, 1.0 - alpha),
        resamples,
        seed,
        "percentile",
        redraws,
    )
