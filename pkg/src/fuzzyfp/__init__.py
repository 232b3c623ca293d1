"""fuzzyfp: compact ranked per-class signatures with fuzzy-set similarity.

Build a fingerprint per class from labeled vectors (or token bags), then
classify instances by the fuzzy-AND overlap between their fingerprint and
each class fingerprint.
"""

from .build import (
    ClassAccumulator,
    FingerprintLibrary,
    accumulate_class,
    build_activation_fingerprint,
    build_library,
    build_token_fingerprint,
    class_rankings,
    instance_fingerprint,
    library_from_rankings,
    token_instance_fingerprint,
)
from .classify import (
    ClassificationResult,
    Explanation,
    ExplanationRow,
    classify,
    classify_record,
    classify_vector,
    explain,
    fingerprint_record,
)
from .data import (
    ActivationDataset,
    EmbeddingRecord,
    LabeledTokenBag,
    TokenDataset,
    TokenRecord,
    Utterance,
    tokenize,
)
from .errors import (
    BuildError,
    ClassificationError,
    DataFormatError,
    DimensionError,
    EvaluationError,
    FeatureSpaceError,
    FuzzyFPError,
    ParameterError,
    UnsupportedVersionError,
)
from .evaluation import (
    AveragedReport,
    ConfusionMatrix,
    EvalReport,
    KSweepReport,
    average_reports,
    confusion_matrix,
    evaluate,
    macro_f1,
    select_k,
    sweep_k,
)
from .fingerprint import (
    Element,
    FeatureSpace,
    Fingerprint,
    FuzzifyParams,
    SimilarityParams,
    fuzzify,
    rank_by_value,
    similarity,
)
from .storage import (
    DAILYDIALOG_LABELS,
    dailydialog_token_records,
    load_dailydialog,
    load_embeddings,
    load_library,
    load_token_dataset,
    save_embeddings,
    save_library,
    save_token_dataset,
)
from .synth import SyntheticSpec, make_separable_dataset

__version__ = "0.1.0"
