"""Acceptance criteria 1-11, one test each.

Every test records a PASS/FAIL line that is repeated in the terminal summary.
"""

import itertools
import json
import subprocess
import sys
import textwrap
import time
import unicodedata
from fractions import Fraction

import numpy as np
import pytest

from gaeval.aggregate import Metric, aggregate, bootstrap_ci
from gaeval.align import AlignedPair, ErrorCounts, align, score_pair
from gaeval.analysis import DEFAULT_INS_THRESHOLD_PCT, ErrorProfile, RunHandle, cross_corpus_gap, error_profile
from gaeval.corpus_io import RESULTS_FILE, Utterance, emit_artifacts, rescore, render_results, score_run
from gaeval.normalize import NormalizedText, normalize
from fixtures import (
    FADA_WORDS,
    GAP_INPUTS,
    BREAKDOWN_CV,
    BREAKDOWN_FLEURS,
    W2V2_OUTPUTS,
    WHISPER_CHAR_COUNTS,
    WHISPER_PAIRS,
    WHISPER_WORD_COUNTS,
)
from oracles import all_pairs_distance

EMPTY = NormalizedText("", 0, 0)


def counts_pair(sid, s, i, d, n):
    c = ErrorCounts(s, i, d, n)
    return AlignedPair(sid, EMPTY, EMPTY, c, c)


def test_c01_aligner_oracle_equivalence(verdict):
    start = time.perf_counter()
    seqs = [t for k in range(7) for t in itertools.product("abc", repeat=k)]
    oracle = all_pairs_distance(seqs)
    bad = 0
    for ref in seqs:
        for hyp in seqs:
            c = align(ref, hyp)
            if c.sub + c.ins + c.del_ != oracle[ref, hyp] or c.n_ref != len(ref):
                bad += 1
    elapsed = time.perf_counter() - start
    total = len(seqs) ** 2
    ok = bad == 0 and elapsed < 60
    verdict(1, ok, f"{total - bad}/{total} pairs agree with brute force, {elapsed:.1f}s")
    assert ok


def test_c02_global_not_mean(verdict):
    pairs = [counts_pair("u1", 1, 0, 0, 4), counts_pair("u2", 0, 0, 0, 6)]
    wer = aggregate(pairs).wer_pct
    mean = sum(p.utterance_wer for p in pairs) / 2 * 100
    ok = wer == 10.0 and mean == Fraction(25, 2)
    verdict(2, ok, f"global WER {wer} (per-utterance mean {float(mean)})")
    assert ok


def test_c03_insertion_regime(verdict):
    g = aggregate([score_pair("u", "a", "b c d")])
    ok = g.wer_pct == 300.0 and g.ins_pct == 200.0
    verdict(3, ok, f"WER {g.wer_pct}, I {g.ins_pct}")
    assert ok


def test_c04_fada_nfc_nfd(verdict):
    assert len(FADA_WORDS) == 50
    failures = []
    for word in FADA_WORDS:
        nfc = unicodedata.normalize("NFC", word)
        nfd = unicodedata.normalize("NFD", word)
        a, b = normalize(nfc).text, normalize(nfd).text
        fadas = [c for c in nfc.lower() if c in "áéíóú"]
        if a.encode("utf-8") != b.encode("utf-8") or [c for c in a if c in "áéíóú"] != fadas or not fadas:
            failures.append(word)
    ok = not failures
    verdict(4, ok, f"{50 - len(failures)}/50 words identical with fadas intact")
    assert ok, failures


def test_c05_worked_examples(verdict):
    mismatches = []
    for sid, (ref, hyp) in WHISPER_PAIRS.items():
        p = score_pair(sid, ref, hyp)
        if p.word_counts.as_tuple() != WHISPER_WORD_COUNTS[sid]:
            mismatches.append((sid, "word", p.word_counts.as_tuple()))
        if p.char_counts.as_tuple() != WHISPER_CHAR_COUNTS[sid]:
            mismatches.append((sid, "char", p.char_counts.as_tuple()))
    clean = score_pair("cv-216", WHISPER_PAIRS["cv-216"][0], W2V2_OUTPUTS["cv-216"])
    ok = not mismatches and clean.utterance_wer == 0
    verdict(5, ok, f"{8 - len(mismatches)}/8 count tuples match; identical pair WER {float(clean.utterance_wer)}")
    assert ok, mismatches


BOOTSTRAP_CHILD = textwrap.dedent("""
    import json, sys
    from gaeval.align import AlignedPair, ErrorCounts
    from gaeval.aggregate import bootstrap_ci
    from gaeval.normalize import NormalizedText
    e = NormalizedText("", 0, 0)
    pairs = []
    for k in range(150):
        w = ErrorCounts(k % 3, (k * 7) % 5 // 4, k % 2, 3 + k % 11)
        c = ErrorCounts(k % 7, k % 3, (k * 5) % 4, 12 + (k * 13) % 40)
        pairs.append(AlignedPair(f"utt-{k:03d}", e, e, w, c))
    out = {}
    for metric in ("wer", "cer"):
        ci = bootstrap_ci(pairs, metric, resamples=1000, seed=42, workers=int(sys.argv[1]))
        out[metric] = [ci.low_pct.hex(), ci.high_pct.hex(), ci.redraws]
    print(json.dumps(out))
""")


def test_c06_bootstrap_determinism(verdict):
    outs = []
    for workers in ("1", "8"):
        proc = subprocess.run([sys.executable, "-c", BOOTSTRAP_CHILD, workers],
                              capture_output=True, text=True, check=True)
        outs.append(json.loads(proc.stdout))
    ok = outs[0] == outs[1]
    wer = [float.fromhex(x) for x in outs[0]["wer"][:2]]
    verdict(6, ok, f"workers 1 vs 8 bit-identical: {ok} (WER CI {wer[0]:.4f}..{wer[1]:.4f})")
    assert ok


def test_c07_degenerate_width(verdict):
    pairs = [counts_pair(f"u{k}", 1, 1, 0, 8) for k in range(25)]
    widths = [bootstrap_ci(pairs, m, resamples=1000, seed=42).width for m in Metric]
    ok = widths == [0.0, 0.0]
    verdict(7, ok, f"CI widths {widths}")
    assert ok


@pytest.mark.slow
def test_c08_bootstrap_coverage(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(20240611)
    covered = 0
    trials = 200
    for t in range(trials):
        subs = rng.binomial(10, 0.2, size=100)
        pairs = [counts_pair(f"u{k:03d}", int(s), 0, 0, 10) for k, s in enumerate(subs)]
        ci = bootstrap_ci(pairs, Metric.WER, resamples=1000, seed=t)
        covered += ci.low_pct <= 20.0 <= ci.high_pct
    elapsed = time.perf_counter() - start
    ok = covered / trials >= 0.85 and elapsed < 300
    verdict(8, ok, f"coverage {covered}/{trials} = {covered / trials:.1%}, {elapsed:.1f}s")
    assert ok


def test_c09_round_trip(tmp_path, verdict):
    utts = [Utterance(sid, ref) for sid, (ref, _) in WHISPER_PAIRS.items()]
    utts.append(Utterance("silence", "", empty_ok=True))
    hyps = {sid: hyp for sid, (_, hyp) in WHISPER_PAIRS.items()}
    hyps["silence"] = "uh"
    run = score_run(utts, hyps, dataset_name="fixture", dataset_split="test", model_identity="whisper", seed=7)
    emit_artifacts(run, tmp_path / "run")
    again = rescore(tmp_path / "run")
    original = (tmp_path / "run" / RESULTS_FILE).read_bytes()
    emit_artifacts(again, tmp_path / "again")
    ok = (render_results(again.score, again.cis).encode("utf-8") == original
          and (tmp_path / "again" / RESULTS_FILE).read_bytes() == original)
    verdict(9, ok, f"results.json reproduced byte-for-byte ({len(original)} bytes)")
    assert ok


def test_c10_gap_arithmetic(verdict):
    a = [RunHandle(m, "cv", cv, 0.0, 0.0, 0.0, 0.0, {}) for m, cv, _, _ in GAP_INPUTS]
    b = [RunHandle(m, "fleurs", fl, 0.0, 0.0, 0.0, 0.0, {}) for m, _, fl, _ in GAP_INPUTS]
    got = {r.model_name: r.delta_pct for r in cross_corpus_gap(a, b)}
    errs = {m: abs(round(got[m], 1) - shown) for m, _, _, shown in GAP_INPUTS}
    ok = all(e <= 0.1 + 1e-9 for e in errs.values())
    verdict(10, ok, "deltas " + ", ".join(f"{m} {got[m]:+.1f}" for m, *_ in GAP_INPUTS))
    assert ok


def test_c11_error_profile_table(verdict):
    wrong = []
    for dataset, rows in (("cv", BREAKDOWN_CV), ("fleurs", BREAKDOWN_FLEURS)):
        for model, family, wer, s, i, d in rows:
            got = error_profile(RunHandle(model, dataset, wer, 0.0, s, i, d, {}))
            if family == "whisper":
                want = ErrorProfile.INSERTION
            elif family == "api" and dataset == "fleurs":
                want = ErrorProfile.DELETION
            elif family == "w2v2":
                want = ErrorProfile.SUBSTITUTION
            else:
                continue
            if got is not want:
                wrong.append((model, dataset, got.value))
    ok = not wrong
    verdict(11, ok, f"{len(wrong)} misclassified rows at insertion threshold {DEFAULT_INS_THRESHOLD_PCT}%" + (f": {wrong}" if wrong else ""))
    assert ok
