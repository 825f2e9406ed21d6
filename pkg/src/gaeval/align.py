"""Unit-cost edit-distance alignment with a deterministic S/I/D split."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .normalize import NormConfig, NormalizedText, char_tokens, normalize, word_tokens

__all__ = ["ErrorCounts", "AlignedPair", "align", "alignment", "score_pair"]

MATCH, SUB, DEL, INS = "=", "S", "D", "I"


@dataclass(frozen=True)
class ErrorCounts:
    sub: int = 0
    ins: int = 0
    del_: int = 0
    n_ref: int = 0

    @property
    def errors(self) -> int:
        return self.sub + self.ins + self.del_

    def rate(self) -> Fraction | None:
        """Exact error rate, ``None`` when there are no reference tokens."""
        if self.n_ref == 0:
            return None
        return Fraction(self.errors, self.n_ref)

    def to_dict(self) -> dict:
        return {"sub": self.sub, "ins": self.ins, "del": self.del_, "n_ref": self.n_ref}

    @classmethod
    def from_dict(cls, d: dict) -> "ErrorCounts":
        return cls(d["sub"], d["ins"], d["del"], d["n_ref"])

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.sub, self.ins, self.del_, self.n_ref)


@dataclass(frozen=True)
class AlignedPair:
    sample_id: str
    ref_norm: NormalizedText
    hyp_norm: NormalizedText
    word_counts: ErrorCounts
    char_counts: ErrorCounts

    @property
    def utterance_wer(self) -> Fraction | None:
        return self.word_counts.rate()

    @property
    def utterance_cer(self) -> Fraction | None:
        return self.char_counts.rate()


def _cost_table(ref: Sequence, hyp: Sequence) -> list[list[int]]:
    m = len(hyp)
    table = [list(range(m + 1))]
    prev = table[0]
    for i, r in enumerate(ref, 1):
        row = [i] * (m + 1)
        left = i
        for j in range(1, m + 1):
            diag = prev[j - 1] if r == hyp[j - 1] else prev[j - 1] + 1
            up = prev[j] + 1
            best = diag if diag < up else up
            if left + 1 < best:
                best = left + 1
            row[j] = left = best
        table.append(row)
        prev = row
    return table


def _backtrace(ref: Sequence, hyp: Sequence, table: list[list[int]]):
    # preference among equal-cost moves: match > substitution > deletion > insertion
    i, j = len(ref), len(hyp)
    while i or j:
        cur = table[i][j]
        if i and j:
            d = table[i - 1][j - 1]
            if ref[i - 1] == hyp[j - 1] and d == cur:
                yield MATCH
                i -= 1
                j -= 1
                continue
            if d + 1 == cur:
                yield SUB
                i -= 1
                j -= 1
                continue
        if i and table[i - 1][j] + 1 == cur:
            yield DEL
            i -= 1
        else:
            yield INS
            j -= 1


def alignment(ref: Sequence, hyp: Sequence) -> list[str]:
    """Edit operations in left-to-right order ('=', 'S', 'D', 'I')."""
    ops = list(_backtrace(ref, hyp, _cost_table(ref, hyp)))
    ops.reverse()
    return ops


def align(ref: Sequence, hyp: Sequence) -> ErrorCounts:
    """Minimal unit-cost alignment counts of ``hyp`` against ``ref``.

    Equal-cost alignments are resolved by walking back from the end of both
    sequences preferring match, then substitution, deletion, insertion, so
    the S/I/D split is a function of the inputs alone.
    """
    n, m = len(ref), len(hyp)
    if n == 0 or m == 0:
        return ErrorCounts(0, m, n, n)
    sub = del_ = ins = 0
    for op in _backtrace(ref, hyp, _cost_table(ref, hyp)):
        if op is SUB:
            sub += 1
        elif op is DEL:
            del_ += 1
        elif op is INS:
            ins += 1
    return ErrorCounts(sub, ins, del_, n)


def score_pair(sample_id: str, raw_ref: str, raw_hyp: str, config: NormConfig = NormConfig()) -> AlignedPair:
    ref = normalize(raw_ref, config, sample_id=sample_id)
    hyp = normalize(raw_hyp, config, sample_id=sample_id)
    return AlignedPair(
        sample_id,
        ref,
        hyp,
        align(word_tokens(ref), word_tokens(hyp)),
        align(char_tokens(ref), char_tokens(hyp)),
    )
