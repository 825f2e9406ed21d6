"""
Bootstrap confidence intervals
==============================

Utterances are resampled whole.  The interval depends only on the corpus,
the number of resamples and the seed, never on how many threads run it.
"""

import numpy as np

from gaeval import Metric, bootstrap_ci
from gaeval.align import AlignedPair, ErrorCounts
from gaeval.normalize import NormalizedText

empty = NormalizedText("", 0, 0)
rng = np.random.default_rng(0)


def corpus(n_utts, words=10, rate=0.2):
    subs = rng.binomial(words, rate, size=n_utts)
    return [AlignedPair(f"u{k:04d}", empty, empty, ErrorCounts(int(s), 0, 0, words),
                        ErrorCounts(int(s), 0, 0, words)) for k, s in enumerate(subs)]


# Larger test sets give narrower intervals around the same true rate.
for n in (50, 200, 800):
    ci = bootstrap_ci(corpus(n), Metric.WER, resamples=1000, seed=42)
    print(f"{n:4d} utterances: [{ci.low_pct:.2f}, {ci.high_pct:.2f}]  width {ci.width:.2f}")

pairs = corpus(300)
one = bootstrap_ci(pairs, Metric.WER, seed=42, workers=1)
eight = bootstrap_ci(pairs, Metric.WER, seed=42, workers=8)
print("1 vs 8 workers identical:", one == eight)
