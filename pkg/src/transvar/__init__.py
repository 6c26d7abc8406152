"""Genre and translation-method classification of translated text.

Delexicalized POS n-gram features feed per-class add-one-smoothed
language models; classification is the argmax of summed log-likelihoods
plus log-prior. The package also ships feature-informativeness analysis,
experiment protocols, a synthetic corpus generator for end-to-end
testing, and a command-line surface (``transvar``).
"""

from .corpus import (
    COARSE_METHODS,
    GENRES,
    METHODS,
    Document,
    LabeledInstance,
    Token,
    coarsen_method,
    extract_instances,
    parse_vertical,
    write_vertical,
)
from .errors import (
    CorruptModelError,
    EmptyClassError,
    EmptyInstanceError,
    FocalMismatchError,
    InsufficientDataError,
    InvalidSpecError,
    MalformedLineError,
    MinClassesError,
    MissingHeaderError,
    ModeMismatchError,
    NonErgodicChainError,
    NotBinaryError,
    OrderOutOfRangeError,
    TransvarError,
    UnknownLabelError,
    VersionMismatchError,
)
from .estimator import (
    Delexicalizer,
    LikelihoodEstimationClassifier,
    NGramExtractor,
)
from .evaluation import (
    DIMENSIONS,
    ConfusionMatrix,
    MetricsReport,
    PairwiseTable,
    SplitSpec,
    evaluate,
    fine_method,
    group_instances,
    infer_dimension,
    instance_label,
    make_folds,
    make_split,
    metrics,
    pairwise_genres,
    run_experiment,
)
from .features import distribution, membership, top_features
from .model import (
    ClassifierModel,
    NGramModel,
    classify,
    laplace_prob,
    load_model,
    save_model,
    score,
    train,
)
from .representation import (
    MODES,
    delexicalize,
    extract_ngrams,
    featurize_instance,
    ngram_key,
)
from .testkit import GeneratorSpec, generate, separation

__version__ = "0.1.0"

__all__ = [
    "COARSE_METHODS",
    "DIMENSIONS",
    "ClassifierModel",
    "ConfusionMatrix",
    "CorruptModelError",
    "Delexicalizer",
    "Document",
    "EmptyClassError",
    "EmptyInstanceError",
    "FocalMismatchError",
    "GENRES",
    "GeneratorSpec",
    "InsufficientDataError",
    "InvalidSpecError",
    "LabeledInstance",
    "LikelihoodEstimationClassifier",
    "METHODS",
    "MODES",
    "MalformedLineError",
    "MetricsReport",
    "MinClassesError",
    "MissingHeaderError",
    "ModeMismatchError",
    "NGramExtractor",
    "NGramModel",
    "NonErgodicChainError",
    "NotBinaryError",
    "OrderOutOfRangeError",
    "PairwiseTable",
    "SplitSpec",
    "Token",
    "TransvarError",
    "UnknownLabelError",
    "VersionMismatchError",
    "classify",
    "coarsen_method",
    "delexicalize",
    "distribution",
    "evaluate",
    "extract_instances",
    "extract_ngrams",
    "featurize_instance",
    "fine_method",
    "generate",
    "group_instances",
    "infer_dimension",
    "instance_label",
    "laplace_prob",
    "load_model",
    "make_folds",
    "make_split",
    "membership",
    "metrics",
    "ngram_key",
    "pairwise_genres",
    "parse_vertical",
    "run_experiment",
    "save_model",
    "score",
    "separation",
    "top_features",
    "train",
    "write_vertical",
]
