"""Irish-aware ASR evaluation: normalise, align, aggregate, report."""

__version__ = "0.1.0"

from .normalize import (  # noqa: E402
    ApostrophePolicy,
    DigitPolicy,
    NormConfig,
    NormalizationError,
    NormalizedText,
    char_tokens,
    normalize,
    word_tokens,
)
from .align import AlignedPair, ErrorCounts, align, alignment, score_pair  # noqa: E402
from .aggregate import (  # noqa: E402
    AggregateError,
    BootstrapCI,
    GlobalScore,
    Metric,
    aggregate,
    bootstrap_ci,
)
from .corpus_io import (  # noqa: E402
    ManifestError,
    RunMetadata,
    Utterance,
    emit_artifacts,
    load_manifest,
    load_predictions,
    rescore,
    score_run,
)
from .adapter import AdapterError, AdapterProtocolError, run_adapter  # noqa: E402
from .analysis import (  # noqa: E402
    ErrorProfile,
    GapRow,
    RunHandle,
    cross_corpus_gap,
    error_profile,
    filter_hard,
    leaderboard,
)
