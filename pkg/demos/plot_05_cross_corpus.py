"""
Comparing models across corpora
===============================

Reports read run directories.  Here the runs are built in memory from their
headline numbers, which is all the reports need.
"""

from gaeval.analysis import RunHandle, cross_corpus_gap, error_profile, format_table, leaderboard


def run(model, dataset, wer, s, i, d):
    return RunHandle(model, dataset, wer, 0.0, s, i, d, {})


cv = [run("azure", "cv", 22.3, 15.8, 1.7, 4.8), run("mms-1b-all", "cv", 54.3, 44.1, 2.8, 7.4),
      run("whisper-large-v3", "cv", 125.6, 78.8, 33.1, 13.7)]
fleurs = [run("azure", "fleurs", 57.5, 21.5, 3.5, 32.5), run("mms-1b-all", "fleurs", 61.6, 51.9, 3.2, 6.5),
          run("whisper-large-v3", "fleurs", 217.8, 89.8, 123.7, 4.3)]

print(format_table(["#", "model", "WER"], [[r.rank, r.model_name, f"{r.wer_pct:.1f}"] for r in leaderboard(cv)], 2))
print()
print(format_table(["model", "cv", "fleurs", "delta"],
                   [[g.model_name, f"{g.wer_a_pct:.1f}", f"{g.wer_b_pct:.1f}", f"{g.delta_pct:+.1f}"]
                    for g in cross_corpus_gap(cv, fleurs)]))
print()
for r in cv + fleurs:
    print(f"{r.model_name:18s} {r.dataset_name:7s} {error_profile(r).value}")
