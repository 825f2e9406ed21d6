"""Manifests, prediction files and the three per-run artifacts.

A run directory holds:

``predictions.jsonl``
    one line per manifest utterance: id, raw reference and hypothesis, their
    normalised forms, per-utterance wer/cer (percent, ``null`` when the
    reference is empty), word and char counts, flags.
``results.json``
    global scores and bootstrap intervals.
``meta.json``
    dataset, model, normaliser config, bootstrap parameters, software
    versions, flagged utterances, timestamp.

``results.json`` is a pure function of ``predictions.jsonl`` plus the
normaliser config and bootstrap parameters in ``meta.json``; see
:func:`rescore`.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
import platform
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import __version__
from .aggregate import (
    DEFAULT_RESAMPLES,
    DEFAULT_SEED,
    BootstrapCI,
    GlobalScore,
    Metric,
    aggregate,
    bootstrap_ci,
)
from .align import AlignedPair, ErrorCounts, score_pair
from .normalize import NormConfig

__all__ = [
    "ManifestError",
    "Utterance",
    "RunMetadata",
    "ScoredRun",
    "PREDICTIONS_FILE",
    "RESULTS_FILE",
    "META_FILE",
    "FLAG_MISSING",
    "FLAG_TIMEOUT",
    "FLAG_NO_REPLY",
    "FLAG_EMPTY_REFERENCE",
    "read_jsonl",
    "load_manifest",
    "load_predictions",
    "score_run",
    "emit_artifacts",
    "load_run",
    "rescore",
    "results_json",
    "render_results",
    "software_versions",
]

PREDICTIONS_FILE = "predictions.jsonl"
RESULTS_FILE = "results.json"
META_FILE = "meta.json"
ARTIFACTS = (PREDICTIONS_FILE, RESULTS_FILE, META_FILE)

FLAG_MISSING = "missing_prediction"
FLAG_TIMEOUT = "adapter_timeout"
FLAG_NO_REPLY = "adapter_no_reply"
FLAG_EMPTY_REFERENCE = "empty_reference"


class ManifestError(ValueError):
    """Malformed manifest or predictions file."""


@dataclass(frozen=True)
class Utterance:
    sample_id: str
    reference: str
    audio_path: str | None = None
    empty_ok: bool = False


def software_versions() -> dict[str, str]:
    return {"gaeval": __version__, "python": platform.python_version(), "numpy": np.__version__}


@dataclass
class RunMetadata:
    dataset_name: str
    dataset_split: str
    utterance_count: int
    model_identity: str
    norm_config: NormConfig = field(default_factory=NormConfig)
    resamples: int = DEFAULT_RESAMPLES
    seed: int = DEFAULT_SEED
    redraws: dict[str, int] = field(default_factory=dict)
    flags: dict[str, list[str]] = field(default_factory=dict)
    software_versions: dict[str, str] = field(default_factory=software_versions)
    timestamp: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "dataset": {"name": self.dataset_name, "split": self.dataset_split, "count": self.utterance_count},
            "model": self.model_identity,
            "norm_config": self.norm_config.to_dict(),
            "bootstrap": {
                "resamples": self.resamples,
                "seed": self.seed,
                "method": "percentile",
                "redraws": self.redraws,
            },
            "flags": self.flags,
            "software_versions": self.software_versions,
            "timestamp": self.timestamp,
        }
        d.update(self.extra)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunMetadata":
        known = {"dataset", "model", "norm_config", "bootstrap", "flags", "software_versions", "timestamp"}
        return cls(
            dataset_name=d["dataset"]["name"],
            dataset_split=d["dataset"]["split"],
            utterance_count=d["dataset"]["count"],
            model_identity=d["model"],
            norm_config=NormConfig.from_dict(d["norm_config"]),
            resamples=d["bootstrap"]["resamples"],
            seed=d["bootstrap"]["seed"],
            redraws=d["bootstrap"].get("redraws", {}),
            flags=d.get("flags", {}),
            software_versions=d.get("software_versions", {}),
            timestamp=d.get("timestamp", ""),
            extra={k: v for k, v in d.items() if k not in known},
        )


@dataclass
class ScoredRun:
    """Everything needed to write a run directory."""

    utterances: list[Utterance]
    hypotheses: dict[str, str]
    flags: dict[str, list[str]]
    pairs: list[AlignedPair]
    score: GlobalScore
    cis: dict[Metric, BootstrapCI]
    meta: RunMetadata


def read_jsonl(path: Path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ManifestError(f"{path}:{lineno}: malformed JSON ({e.msg})") from None
            if not isinstance(obj, dict):
                raise ManifestError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def _field(obj: dict, key: str, path: Path, lineno: int) -> str:
    if key not in obj:
        raise ManifestError(f"{path}:{lineno}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, str):
        raise ManifestError(f"{path}:{lineno}: field {key!r} must be a string")
    return value


def load_manifest(path: str | os.PathLike) -> list[Utterance]:
    """Read a JSONL manifest of ``{"id", "reference", "audio"?}`` objects.

    An empty reference is accepted only when the line also carries
    ``"empty_reference": true``.
    """
    path = Path(path)
    out: list[Utterance] = []
    seen: set[str] = set()
    for lineno, obj in read_jsonl(path):
        sid = _field(obj, "id", path, lineno)
        ref = _field(obj, "reference", path, lineno)
        audio = obj.get("audio")
        if audio is not None and not isinstance(audio, str):
            raise ManifestError(f"{path}:{lineno}: field 'audio' must be a string")
        if "\t" in sid or "\n" in sid:
            raise ManifestError(f"{path}:{lineno}: id may not contain tabs or newlines")
        if sid in seen:
            raise ManifestError(f"{path}:{lineno}: duplicate id {sid!r}")
        empty_ok = bool(obj.get("empty_reference", False))
        if not ref.strip() and not empty_ok:
            raise ManifestError(f"{path}:{lineno}: empty reference for {sid!r} not declared with empty_reference")
        seen.add(sid)
        out.append(Utterance(sid, ref, audio, empty_ok))
    return out


def load_predictions(path: str | os.PathLike) -> dict[str, str]:
    """Read ``{"id", "hypothesis", ...}`` lines; extra fields are ignored."""
    path = Path(path)
    out: dict[str, str] = {}
    for lineno, obj in read_jsonl(path):
        sid = _field(obj, "id", path, lineno)
        out[sid] = _field(obj, "hypothesis", path, lineno)
    return out


def _flag_index(flags: Mapping[str, Iterable[str]]) -> dict[str, list[str]]:
    by_id: dict[str, list[str]] = {}
    for flag, ids in flags.items():
        for sid in ids:
            by_id.setdefault(sid, []).append(flag)
    return by_id


def score_run(
    utterances: Sequence[Utterance],
    hypotheses: Mapping[str, str],
    *,
    dataset_name: str,
    dataset_split: str,
    model_identity: str,
    config: NormConfig = NormConfig(),
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    flags: Mapping[str, Iterable[str]] | None = None,
) -> ScoredRun:
    """Score hypotheses against a manifest.

    Utterances without a hypothesis are scored against the empty string and
    flagged ``missing_prediction``.  Hypotheses for ids outside the manifest
    are ignored.
    """
    flags = {k: list(v) for k, v in (flags or {}).items()}
    hyps: dict[str, str] = {}
    missing = []
    for u in utterances:
        if u.sample_id in hypotheses:
            hyps[u.sample_id] = hypotheses[u.sample_id]
        else:
            hyps[u.sample_id] = ""
            missing.append(u.sample_id)
    if missing:
        flags.setdefault(FLAG_MISSING, [])
        flags[FLAG_MISSING] += [m for m in missing if m not in flags[FLAG_MISSING]]
    empty = [u.sample_id for u in utterances if u.empty_ok and not u.reference.strip()]
    if empty:
        flags[FLAG_EMPTY_REFERENCE] = empty
    flags = {k: v for k, v in sorted(flags.items()) if v}

    pairs = [score_pair(u.sample_id, u.reference, hyps[u.sample_id], config) for u in utterances]
    score = aggregate(pairs)
    cis = {m: bootstrap_ci(pairs, m, resamples, seed, workers) for m in Metric}
    meta = RunMetadata(
        dataset_name=dataset_name,
        dataset_split=dataset_split,
        utterance_count=len(pairs),
        model_identity=model_identity,
        norm_config=config,
        resamples=resamples,
        seed=seed,
        redraws={m.value: ci.redraws for m, ci in cis.items()},
        flags=flags,
    )
    return ScoredRun(list(utterances), hyps, flags, pairs, score, cis, meta)


def _rate_pct(counts: ErrorCounts) -> float | None:
    if counts.n_ref == 0:
        return None
    return 100.0 * counts.errors / counts.n_ref


def prediction_records(run: ScoredRun) -> list[dict]:
    by_id = _flag_index(run.flags)
    records = []
    for u, p in zip(run.utterances, run.pairs):
        records.append({
            "id": u.sample_id,
            "reference": u.reference,
            "hypothesis": run.hypotheses[u.sample_id],
            "reference_norm": p.ref_norm.text,
            "hypothesis_norm": p.hyp_norm.text,
            "wer": _rate_pct(p.word_counts),
            "cer": _rate_pct(p.char_counts),
            "word_counts": p.word_counts.to_dict(),
            "char_counts": p.char_counts.to_dict(),
            "flags": by_id.get(u.sample_id, []),
        })
    return records


def results_json(score: GlobalScore, cis: Mapping[Metric, BootstrapCI]) -> dict:
    return {
        "wer": score.wer_pct,
        "cer": score.cer_pct,
        "sub": score.sub_pct,
        "ins": score.ins_pct,
        "del": score.del_pct,
        "total_ref_words": score.total_ref_words,
        "total_ref_chars": score.total_ref_chars,
        "utterance_count": score.utterance_count,
        "word_errors": score.word_totals.to_dict(),
        "char_errors": score.char_totals.to_dict(),
        "ci_95": {m.value: cis[m].to_dict() for m in Metric},
    }


def _dump_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def _dump_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)


def render_results(score: GlobalScore, cis: Mapping[Metric, BootstrapCI]) -> str:
    """Exact text written to ``results.json``."""
    return _dump_json(results_json(score, cis))


def emit_artifacts(run: ScoredRun, out_dir: str | os.PathLike) -> dict[str, Path]:
    """Write the three artifacts into ``out_dir``, all or none.

    Files are first written under temporary names inside ``out_dir`` and then
    renamed into place; on any failure every file written so far is removed,
    and so is ``out_dir`` itself if this call created it.
    """
    out_dir = Path(out_dir)
    created = not out_dir.exists()
    out_dir.mkdir(parents=True, exist_ok=True)
    contents = {
        PREDICTIONS_FILE: _dump_jsonl(prediction_records(run)),
        RESULTS_FILE: render_results(run.score, run.cis),
        META_FILE: _dump_json(run.meta.to_dict()),
    }
    tmp = {name: out_dir / f".{name}.tmp" for name in contents}
    final = {name: out_dir / name for name in contents}
    placed: list[Path] = []
    try:
        for name, text in contents.items():
            with open(tmp[name], "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        for name in contents:
            os.replace(tmp[name], final[name])
            placed.append(final[name])
    except BaseException:
        for p in list(tmp.values()) + placed:
            try:
                p.unlink()
            except FileNotFoundError:
                pass
        if created:
            try:
                out_dir.rmdir()
            except OSError:
                pass
        raise
    return final


@dataclass
class LoadedRun:
    meta: RunMetadata
    results: dict
    predictions: list[dict]


def load_run(run_dir: str | os.PathLike) -> LoadedRun:
    run_dir = Path(run_dir)
    for name in ARTIFACTS:
        if not (run_dir / name).is_file():
            raise ManifestError(f"{run_dir}: missing {name}")
    meta = RunMetadata.from_dict(json.loads((run_dir / META_FILE).read_text(encoding="utf-8")))
    results = json.loads((run_dir / RESULTS_FILE).read_text(encoding="utf-8"))
    preds = [obj for _, obj in read_jsonl(run_dir / PREDICTIONS_FILE)]
    return LoadedRun(meta, results, preds)


def rescore(run_dir: str | os.PathLike, workers: int = 1) -> ScoredRun:
    """Recompute a run from its ``predictions.jsonl`` and ``meta.json`` alone.

    No audio and no model are needed.  Flags recorded per prediction line are
    carried over; ``meta.json`` fields other than the scoring inputs are kept.
    """
    loaded = load_run(run_dir)
    meta = loaded.meta
    utterances = []
    hyps = {}
    flags: dict[str, list[str]] = {}
    for rec in loaded.predictions:
        sid = rec["id"]
        line_flags = rec.get("flags", [])
        utterances.append(Utterance(sid, rec["reference"], None, FLAG_EMPTY_REFERENCE in line_flags))
        hyps[sid] = rec["hypothesis"]
        for flag in line_flags:
            if flag != FLAG_EMPTY_REFERENCE:
                flags.setdefault(flag, []).append(sid)
    run = score_run(
        utterances,
        hyps,
        dataset_name=meta.dataset_name,
        dataset_split=meta.dataset_split,
        model_identity=meta.model_identity,
        config=meta.norm_config,
        resamples=meta.resamples,
        seed=meta.seed,
        workers=workers,
        flags=flags,
    )
    run.meta.extra = dict(meta.extra)
    run.meta.extra["rescored_from"] = str(Path(run_dir))
    return run
