"""
Scoring a run and re-scoring it
===============================

A scored run is three files.  predictions.jsonl and meta.json are enough to
rebuild results.json exactly, confidence intervals included.
"""

import tempfile
from pathlib import Path

from gaeval.corpus_io import Utterance, emit_artifacts, render_results, rescore, score_run

utterances = [
    Utterance("cv-545", "Dia dhaoibh tráthnóna"),
    Utterance("cv-216", "Tabhair cabhair don fhoireann"),
    Utterance("cv-900", "Tá an aimsir go breá"),
]
hypotheses = {
    "cv-545": "dia dhaoibh tráthnóna",
    "cv-216": "tabhair cabhair don fhoireann",
    # cv-900 has no prediction: it is scored as an empty hypothesis and flagged
}

run = score_run(utterances, hypotheses, dataset_name="cv", dataset_split="test",
                model_identity="example-model", resamples=500)
out = Path(tempfile.mkdtemp()) / "run"
emit_artifacts(run, out)
print(sorted(p.name for p in out.iterdir()))
print((out / "results.json").read_text(encoding="utf-8"))

again = rescore(out)
print("byte-identical:", render_results(again.score, again.cis) == (out / "results.json").read_text(encoding="utf-8"))
print("flags:", again.flags)
