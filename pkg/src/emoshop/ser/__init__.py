"""Speech emotion recognition: preprocessing, features, classifier, evaluation."""
from emoshop.ser.features import (
    ClipTooShort,
    FeatureConfig,
    FeatureVector,
    extract_features,
    preprocess,
)
from emoshop.ser.classifier import (
    DimensionMismatch,
    EmotionClassifier,
    InsufficientData,
    train,
)
from emoshop.ser.corpus import (
    Corpus,
    CorpusItem,
    MissingManifest,
    UnknownLabel,
    load_corpus,
)
from emoshop.ser.evaluate import (
    EvaluationReport,
    NotEnoughSamplesPerClass,
    classification_report,
    evaluate,
)

__all__ = [
    "ClipTooShort",
    "FeatureConfig",
    "FeatureVector",
    "extract_features",
    "preprocess",
    "DimensionMismatch",
    "EmotionClassifier",
    "InsufficientData",
    "train",
    "Corpus",
    "CorpusItem",
    "MissingManifest",
    "UnknownLabel",
    "load_corpus",
    "EvaluationReport",
    "NotEnoughSamplesPerClass",
    "classification_report",
    "evaluate",
]
