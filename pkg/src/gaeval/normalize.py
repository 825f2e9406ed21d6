"""Irish-aware text normalisation.

The same pipeline is applied to references and hypotheses before scoring.
Fadas (á é í ó ú) and initial mutations (bh-, mb-, gc-, nd-, bhf- ...) are
ordinary letters here and pass through untouched; only case, punctuation and
whitespace are canonicalised.

Pipeline order (fixed):

0. delete zero-width/format and non-whitespace control characters, map the
   curly apostrophe U+2019 to U+0027
1. NFC composition
2. simple per-scalar lowercase
3. punctuation removal (Unicode categories P* and S*); dash punctuation (Pd)
   becomes a space, an apostrophe between two letters survives under
   ``keep_intra_word``
4. whitespace collapse
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import asdict, dataclass

__all__ = [
    "ApostrophePolicy",
    "DigitPolicy",
    "NormConfig",
    "NormalizedText",
    "NormalizationError",
    "normalize",
    "word_tokens",
    "char_tokens",
]

APOSTROPHE = "'"
_APOSTROPHE_VARIANTS = {"’": APOSTROPHE}


class ApostrophePolicy(str, enum.Enum):
    KEEP_INTRA_WORD = "keep_intra_word"
    STRIP_ALL = "strip_all"


class DigitPolicy(str, enum.Enum):
    KEEP = "keep"
    REJECT = "reject"


class NormalizationError(ValueError):
    """Raised when input violates the normaliser configuration."""

    def __init__(self, message: str, sample_id: str | None = None):
        self.sample_id = sample_id
        if sample_id is not None:
            message = f"utterance {sample_id!r}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class NormConfig:
    lowercase: bool = True
    strip_punctuation: bool = True
    collapse_whitespace: bool = True
    apostrophe_policy: ApostrophePolicy = ApostrophePolicy.KEEP_INTRA_WORD
    digit_policy: DigitPolicy = DigitPolicy.KEEP

    def __post_init__(self):
        # accept plain strings, e.g. from meta.json or argparse
        object.__setattr__(self, "apostrophe_policy", ApostrophePolicy(self.apostrophe_policy))
        object.__setattr__(self, "digit_policy", DigitPolicy(self.digit_policy))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["apostrophe_policy"] = self.apostrophe_policy.value
        d["digit_policy"] = self.digit_policy.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NormConfig":
        return cls(**d)


@dataclass(frozen=True)
class NormalizedText:
    text: str
    word_count: int
    char_count: int

    @classmethod
    def from_text(cls, text: str) -> "NormalizedText":
        return cls(text, len(text.split()), len(text))


def _is_letter(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L")


def _drop_invisible(text: str) -> str:
    out = []
    for ch in text:
        cat = unicodedata.category(ch)
        if cat == "Cf" or (cat == "Cc" and not ch.isspace()):
            continue
        out.append(_APOSTROPHE_VARIANTS.get(ch, ch))
    return "".join(out)


def _simple_lower(text: str) -> str:
    out = []
    for ch in text:
        low = ch.lower()
        # str.lower applies the full mapping; U+0130 is the only scalar whose
        # full lowercase is longer than one scalar, its simple mapping is "i"
        out.append(low if len(low) == 1 else low[0])
    return "".join(out)


def _strip_punctuation(text: str, policy: ApostrophePolicy) -> str:
    out = []
    last = len(text) - 1
    for i, ch in enumerate(text):
        cat = unicodedata.category(ch)
        if cat[0] not in "PS":
            out.append(ch)
        elif cat == "Pd":
            out.append(" ")
        elif (
            ch == APOSTROPHE
            and policy is ApostrophePolicy.KEEP_INTRA_WORD
            and 0 < i < last
            and _is_letter(text[i - 1])
            and _is_letter(text[i + 1])
        ):
            out.append(ch)
    return "".join(out)


def normalize(raw: str, config: NormConfig = NormConfig(), *, sample_id: str | None = None) -> NormalizedText:
    """Normalise one transcript.

    Args:
        raw: any Unicode string, in any normal form.
        config: normaliser toggles.
        sample_id: only used to label a configuration-violation error.

    Raises:
        NormalizationError: ``digit_policy`` is ``reject`` and ``raw`` holds a
            decimal digit.
    """
    if config.digit_policy is DigitPolicy.REJECT:
        for ch in raw:
            if unicodedata.category(ch) == "Nd":
                raise NormalizationError(f"digit {ch!r} rejected by digit_policy=reject", sample_id)

    text = _drop_invisible(raw)
    text = unicodedata.normalize("NFC", text)
    if config.lowercase:
        text = _simple_lower(text)
    if config.strip_punctuation:
        text = _strip_punctuation(text, config.apostrophe_policy)
    if config.collapse_whitespace:
        text = " ".join(text.split())
    # deleting a symbol can leave a base letter next to a combining mark
    text = unicodedata.normalize("NFC", text)
    return NormalizedText.from_text(text)


def word_tokens(t: NormalizedText) -> list[str]:
    return t.text.split()


def char_tokens(t: NormalizedText) -> list[str]:
    """Unicode scalars of the text, inter-word spaces included."""
    return list(t.text)
