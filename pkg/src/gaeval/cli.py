"""Command-line entry point.

Exit status: 0 on success, 1 on user error (bad flags, unreadable or
malformed inputs, a failed re-score check), 2 on adapter failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .adapter import DEFAULT_TIMEOUT_SECS, AdapterError, run_adapter
from .aggregate import DEFAULT_RESAMPLES, DEFAULT_SEED, AggregateError
from .analysis import (
    DEFAULT_HARD_WER_PCT,
    DEFAULT_INS_THRESHOLD_PCT,
    AnalysisError,
    cross_corpus_gap,
    discover_runs,
    error_profile,
    filter_hard,
    format_table,
    leaderboard,
)
from .corpus_io import (
    FLAG_NO_REPLY,
    FLAG_TIMEOUT,
    RESULTS_FILE,
    ManifestError,
    emit_artifacts,
    load_manifest,
    load_predictions,
    rescore,
    render_results,
    score_run,
    software_versions,
)
from .normalize import ApostrophePolicy, DigitPolicy, NormalizationError, NormConfig, normalize

log = logging.getLogger("gaeval")

EXIT_OK, EXIT_USER, EXIT_ADAPTER = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USER, f"{self.prog}: error: {message}\n")


def _add_norm_flags(p):
    g = p.add_argument_group("normaliser")
    g.add_argument("--no-lowercase", dest="lowercase", action="store_false")
    g.add_argument("--no-strip-punctuation", dest="strip_punctuation", action="store_false")
    g.add_argument("--no-collapse-whitespace", dest="collapse_whitespace", action="store_false")
    g.add_argument("--apostrophe-policy", choices=[p.value for p in ApostrophePolicy],
                   default=ApostrophePolicy.KEEP_INTRA_WORD.value)
    g.add_argument("--digit-policy", choices=[p.value for p in DigitPolicy], default=DigitPolicy.KEEP.value)


def _add_bootstrap_flags(p):
    g = p.add_argument_group("bootstrap")
    g.add_argument("--resamples", type=int, default=DEFAULT_RESAMPLES)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--workers", type=int, default=1, help="threads for resampling; output is identical for any value")


def _norm_config(args) -> NormConfig:
    return NormConfig(args.lowercase, args.strip_punctuation, args.collapse_whitespace,
                      args.apostrophe_policy, args.digit_policy)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaeval", description="Irish-aware ASR scoring harness")
    parser.add_argument("--version", action="store_true", help="print component versions and exit")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("normalize", help="normalise stdin lines to stdout")
    _add_norm_flags(p)

    p = sub.add_parser("score", help="score a run and write its artifacts")
    p.add_argument("--manifest", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--predictions")
    src.add_argument("--adapter-cmd")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--timeout-secs", type=float, default=DEFAULT_TIMEOUT_SECS)
    p.add_argument("--dataset-name", help="defaults to the manifest file stem")
    p.add_argument("--dataset-split", default="test")
    p.add_argument("--model", help="model identity; defaults to the predictions stem or adapter command")
    _add_norm_flags(p)
    _add_bootstrap_flags(p)

    p = sub.add_parser("rescore", help="re-score a run directory from predictions.jsonl and meta.json")
    p.add_argument("--run", required=True)
    p.add_argument("--out-dir", help="also write the recomputed artifacts here")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("report", help="cross-run reports")
    rep = p.add_subparsers(dest="report", parser_class=_Parser)
    r = rep.add_parser("leaderboard")
    r.add_argument("--runs", nargs="+", required=True)
    r.add_argument("--dataset")
    r.add_argument("--json", action="store_true")
    r = rep.add_parser("gap")
    r.add_argument("--a", nargs="+", required=True, help="runs on the first corpus")
    r.add_argument("--b", nargs="+", required=True, help="runs on the second corpus")
    r.add_argument("--json", action="store_true")
    r = rep.add_parser("profile")
    r.add_argument("--runs", nargs="+", required=True)
    r.add_argument("--ins-threshold", type=float, default=DEFAULT_INS_THRESHOLD_PCT)
    r.add_argument("--json", action="store_true")

    p = sub.add_parser("filter-hard", help="utterances every included model gets badly wrong")
    p.add_argument("--runs", nargs="+", required=True)
    p.add_argument("--threshold", type=float, default=DEFAULT_HARD_WER_PCT)
    p.add_argument("--exclude", nargs="*", default=[])
    p.add_argument("--json", action="store_true")
    return parser


def _cmd_normalize(args) -> int:
    config = _norm_config(args)
    for n, line in enumerate(sys.stdin, 1):
        out = normalize(line.rstrip("\n"), config, sample_id=f"line {n}")
        sys.stdout.write(out.text + "\n")
    return EXIT_OK


def _cmd_score(args) -> int:
    utterances = load_manifest(args.manifest)
    flags = {}
    if args.predictions:
        hyps = load_predictions(args.predictions)
        model = args.model or Path(args.predictions).stem
    else:
        result = run_adapter(args.adapter_cmd, utterances, timeout=args.timeout_secs)
        hyps = result.hypotheses
        flags[FLAG_TIMEOUT] = result.timed_out
        flags[FLAG_NO_REPLY] = result.unanswered
        model = args.model or args.adapter_cmd
    run = score_run(
        utterances,
        hyps,
        dataset_name=args.dataset_name or Path(args.manifest).stem,
        dataset_split=args.dataset_split,
        model_identity=model,
        config=_norm_config(args),
        resamples=args.resamples,
        seed=args.seed,
        workers=args.workers,
        flags=flags,
    )
    for flag, ids in run.flags.items():
        log.warning("%s: %d utterance(s)", flag, len(ids))
    emit_artifacts(run, args.out_dir)
    s = run.score
    print(f"WER {s.wer_pct:.1f}  CER {s.cer_pct:.1f}  S {s.sub_pct:.1f}  I {s.ins_pct:.1f}  D {s.del_pct:.1f}  "
          f"({s.utterance_count} utterances) -> {args.out_dir}")
    return EXIT_OK


def _cmd_rescore(args) -> int:
    run = rescore(args.run, workers=args.workers)
    recomputed = render_results(run.score, run.cis)
    original = (Path(args.run) / RESULTS_FILE).read_text(encoding="utf-8")
    if args.out_dir:
        emit_artifacts(run, args.out_dir)
    if recomputed != original:
        print(f"rescore of {args.run} does not reproduce {RESULTS_FILE}", file=sys.stderr)
        return EXIT_USER
    print(f"{args.run}: {RESULTS_FILE} reproduced (WER {run.score.wer_pct:.1f}, CER {run.score.cer_pct:.1f})")
    return EXIT_OK


def _emit(rows, headers, as_json, table_rows, align_left=1):
    if as_json:
        print(json.dumps(rows, ensure_ascii=False, indent=2))
    else:
        print(format_table(headers, table_rows, align_left))


def _cmd_report(args) -> int:
    if args.report == "leaderboard":
        rows = leaderboard(discover_runs(args.runs), args.dataset)
        _emit(
            [r.__dict__ for r in rows],
            ["#", "model", "WER", "SUB", "INS", "DEL", "CER"],
            args.json,
            [[r.rank, r.model_name] + [f"{v:.1f}" for v in (r.wer_pct, r.sub_pct, r.ins_pct, r.del_pct, r.cer_pct)]
             for r in rows],
            align_left=2,
        )
    elif args.report == "gap":
        rows = cross_corpus_gap(discover_runs(args.a), discover_runs(args.b))
        _emit(
            [r.__dict__ for r in rows],
            ["model", "A", "B", "delta"],
            args.json,
            [[r.model_name, f"{r.wer_a_pct:.1f}", f"{r.wer_b_pct:.1f}", f"{r.delta_pct:+.1f}"] for r in rows],
        )
    elif args.report == "profile":
        runs = discover_runs(args.runs)
        rows = [{"model": r.model_name, "dataset": r.dataset_name, "sub": r.sub_pct, "ins": r.ins_pct,
                 "del": r.del_pct, "profile": error_profile(r, args.ins_threshold).value} for r in runs]
        _emit(
            rows,
            ["model", "dataset", "S", "I", "D", "profile"],
            args.json,
            [[r["model"], r["dataset"], f"{r['sub']:.1f}", f"{r['ins']:.1f}", f"{r['del']:.1f}", r["profile"]]
             for r in rows],
            align_left=2,
        )
    else:
        print("usage: gaeval report {leaderboard,gap,profile} ...", file=sys.stderr)
        return EXIT_USER
    return EXIT_OK


def _cmd_filter_hard(args) -> int:
    found = filter_hard(discover_runs(args.runs), args.threshold, args.exclude)
    if args.json:
        print(json.dumps({"ids": list(found.ids), "undefined": list(found.undefined)}, ensure_ascii=False, indent=2))
    else:
        for sid in found.ids:
            print(sid)
        if found.undefined:
            log.warning("%d utterance(s) with undefined WER skipped", len(found.undefined))
    return EXIT_OK


COMMANDS = {
    "normalize": _cmd_normalize,
    "score": _cmd_score,
    "rescore": _cmd_rescore,
    "report": _cmd_report,
    "filter-hard": _cmd_filter_hard,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if args.version:
        for name, version in software_versions().items():
            print(f"{name} {version}")
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USER
    try:
        return COMMANDS[args.command](args)
    except AdapterError as e:
        print(f"gaeval: adapter failure: {e}", file=sys.stderr)
        return EXIT_ADAPTER
    except (ManifestError, AnalysisError, AggregateError, NormalizationError, OSError, ValueError) as e:
        print(f"gaeval: error: {e}", file=sys.stderr)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
