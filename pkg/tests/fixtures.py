"""Shared test data."""

# Four published reference / Whisper-output pairs.  The repetition-loop
# output is given in print only as "to a coward ... (333 tokens)"; it is
# rebuilt here as 111 repetitions of the 3-token phrase.
WHISPER_PAIRS = {
    "cv-545": ("dia dhaoibh tráthnóna", "diolch yn fawr iawn am wylior fideo"),
    "cv-216": ("tabhair cabhair don fhoireann", " ".join(["to a coward"] * 111)),
    "fl-609": (
        "phléasc buama amháin lasmuigh doifig an ardghobharnóra",
        "thank you for listening and have a good day",
    ),
    "fl-98": (
        "ina dhiaidh sin bogadh chuig ospidéal addenbrooke i gcambridge é",
        "in the next day ill be back to edinburghs hospital in cambridge",
    ),
}

# The matching outputs of a wav2vec2 model that does not hallucinate.
W2V2_OUTPUTS = {
    "cv-545": "dia dhaoibh tráthnóna",
    "cv-216": "tabhair cabhair don fhoireann",
    "fl-609": "pléis buam amhain leasmúid duifigh an ard gabhrana",
    "fl-98": "ina dhíg sin bothar chuig ospadéal adan bhrog a ceamraid é",
}

# Frozen with tests/oracles.py (independent DP walk + reference normaliser):
# per pair (S, I, D, n_ref) at word and char level.
WHISPER_WORD_COUNTS = {
    "cv-545": (3, 4, 0, 3),
    "cv-216": (4, 329, 0, 4),
    "fl-609": (7, 2, 0, 7),
    "fl-98": (10, 2, 0, 10),
}
WHISPER_CHAR_COUNTS = {
    "cv-545": (15, 14, 0, 21),
    "cv-216": (13, 1302, 0, 29),
    "fl-609": (27, 2, 13, 54),
    "fl-98": (39, 3, 4, 64),
}
# sums of the above: words (24, 337, 0, 24) -> 361/24; chars (94, 1321, 17, 168) -> 179/21
WHISPER_CORPUS_WER_PCT = 100 * 361 / 24
WHISPER_CORPUS_CER_PCT = 100 * 1432 / 168

# Error-type breakdown rows: (model, family, wer, S, I, D) in percent of
# reference words.
BREAKDOWN_CV = [
    ("azure ga-IE", "api", 22.3, 15.8, 1.7, 4.8),
    ("omniASR 7B", "w2v2", 30.7, 25.0, 2.5, 3.2),
    ("Aditya3107 xls-r-1b", "w2v2", 32.4, 26.4, 1.7, 4.3),
    ("omniASR 300M", "w2v2", 37.6, 29.3, 3.4, 4.9),
    ("kingabzpro xls-r-1b", "w2v2", 45.8, 38.2, 3.6, 4.0),
    ("jimregan xlsr-53", "w2v2", 48.9, 40.5, 4.2, 4.2),
    ("cpierse xlsr-53", "w2v2", 49.4, 41.5, 3.9, 4.0),
    ("mms-1b-all", "w2v2", 54.3, 44.1, 2.8, 7.4),
    ("whisper-large-v2", "whisper", 106.0, 73.6, 20.0, 12.4),
    ("whisper-large-v3", "whisper", 125.6, 78.8, 33.1, 13.7),
    ("whisper-medium", "whisper", 129.3, 76.2, 40.6, 12.5),
    ("whisper-large-v3-turbo", "whisper", 225.6, 83.1, 128.8, 13.7),
]
BREAKDOWN_FLEURS = [
    ("omniASR 7B", "w2v2", 39.1, 32.2, 3.4, 3.5),
    ("omniASR 300M", "w2v2", 47.7, 38.4, 4.9, 4.4),
    ("azure ga-IE", "api", 57.5, 21.5, 3.5, 32.5),
    ("mms-1b-all", "w2v2", 61.6, 51.9, 3.2, 6.5),
    ("Aditya3107 xls-r-1b", "w2v2", 75.8, 62.1, 6.2, 7.5),
    ("kingabzpro xls-r-1b", "w2v2", 78.5, 64.7, 9.2, 4.6),
    ("jimregan xlsr-53", "w2v2", 83.0, 68.2, 9.8, 5.0),
    ("cpierse xlsr-53", "w2v2", 83.2, 68.6, 9.8, 4.8),
    ("whisper-large-v2", "whisper", 102.8, 78.2, 19.8, 4.8),
    ("whisper-medium", "whisper", 134.1, 86.5, 43.1, 4.4),
    ("whisper-large-v3", "whisper", 217.8, 89.8, 123.7, 4.3),
    ("whisper-large-v3-turbo", "whisper", 587.6, 91.2, 491.2, 5.1),
]

# Full-precision WERs that round to the published per-corpus WERs and deltas
# of the gap table (omniASR 7B uses the two-decimal figures quoted in the
# abstract).  The error breakdown prints mms and azure on Common Voice one
# tenth higher (54.3, 22.3), so those runs sit right at the .x5 boundary.
# (model, cv, fleurs, displayed delta)
GAP_INPUTS = [
    ("mms-1b-all", 54.2496, 61.5832, 7.3),
    ("omniASR 7B", 30.65, 39.09, 8.4),
    ("azure", 22.2497, 57.4718, 35.2),
    ("Aditya3107", 32.4120, 75.8135, 43.4),
]
# displayed (cv, fleurs) in the gap table
GAP_DISPLAYED = {
    "mms-1b-all": (54.2, 61.6),
    "omniASR 7B": (30.6, 39.1),
    "azure": (22.2, 57.5),
    "Aditya3107": (32.4, 75.8),
}

# Fifty Irish words each carrying at least one fada.
FADA_WORDS = [
    "féar", "tráthnóna", "bréidín", "airneáin", "mealláin", "amháin", "ardghobharnóra", "fáilte",
    "sláinte", "céad", "míle", "bóthar", "úll", "éan", "rí", "tír", "mór", "beagán", "cáca", "dúnta",
    "fíor", "lámh", "máthair", "páiste", "ríomhaire", "scéal", "sráid", "údarás", "ámharach", "cóta",
    "póg", "súil", "múinteoir", "dúchas", "éisteacht", "fómhar", "glúin", "iníon", "lá", "nós", "ór",
    "pósadh", "ráithe", "seomraí", "siúcra", "tógáil", "Éire", "bán", "Gaeltachtaí", "Bríd",
]
