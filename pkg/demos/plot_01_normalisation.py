"""
Normalising Irish transcripts
=============================

Scoring compares normalised text, so the normaliser decides what counts as
an error.  This walk-through shows what it keeps and what it drops.
"""

import unicodedata

from gaeval import NormConfig, normalize
from gaeval.normalize import ApostrophePolicy

# Case and punctuation go; fadas and initial mutations stay.
print(normalize("Dia dhaoibh, a chairde!"))
print(normalize("i nGaillimh agus i bhFéar Bolg").text)

# Decomposed input (e + combining acute) composes before anything else runs,
# so the two spellings of "féar" are the same string afterwards.
nfd = unicodedata.normalize("NFD", "Féar")
print(len(nfd), "code points in ->", normalize(nfd).text, normalize(nfd).char_count, "characters out")

# Apostrophes inside a word survive by default; the typographic one is
# folded into the ASCII form first.
print(normalize("d’fhear 'sé'").text)
print(normalize("d’fhear 'sé'", NormConfig(apostrophe_policy=ApostrophePolicy.STRIP_ALL)).text)

# Hyphens split words; other symbols vanish.
print(normalize("Ard-Mhéara #1").text)
