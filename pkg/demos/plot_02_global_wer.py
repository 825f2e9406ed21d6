"""
Alignment and global error rates
================================

Each utterance is aligned on its own, then the counts are pooled.  Pooling
weights long utterances more than a plain average of per-utterance rates.
"""

from gaeval import aggregate, score_pair
from gaeval.align import alignment

ref = "dia dhaoibh tráthnóna".split()
hyp = "dia dhuit tráthnóna maith".split()
print(alignment(ref, hyp))

pairs = [
    score_pair("short", "tá sé fuar", "tá sé fuar inniu"),
    score_pair("long", "chuaigh mé go dtí an siopa inné agus cheannaigh mé arán", "chuaigh mé go dtí an siopa inné"),
]
for p in pairs:
    print(p.sample_id, p.word_counts, float(p.utterance_wer) * 100)

g = aggregate(pairs)
print(f"global WER {g.wer_pct:.2f}%  (S {g.sub_pct:.2f}, I {g.ins_pct:.2f}, D {g.del_pct:.2f})")
print(f"mean of per-utterance WERs {sum(float(p.utterance_wer) for p in pairs) / len(pairs) * 100:.2f}%")

# Insertions have no ceiling: a looping decoder can push WER well past 100%.
loop = score_pair("loop", "tabhair cabhair don fhoireann", " ".join(["to a coward"] * 20))
print(f"looping output WER {aggregate([loop]).wer_pct:.0f}%")
