"""Stratified k-fold cross-validation with standard classification metrics.

Metrics (accuracy, per-class precision/recall/F1) are averaged across folds;
the confusion matrix is summed. A custom predictor factory can be injected
so the harness itself is testable against known-perfect or constant
predictors.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from emoshop.emotions import LABEL_ORDER, EmotionLabel
from emoshop.ser.classifier import train_on_features
from emoshop.ser.corpus import Corpus, CorpusItem
from emoshop.ser.features import extract_features

_LABEL_INDEX = {label: i for i, label in enumerate(LABEL_ORDER)}

# A predictor maps held-out items to predicted labels; a factory builds one
# from the training items.
Predictor = Callable[[Sequence[CorpusItem]], list[EmotionLabel]]
PredictorFactory = Callable[[Sequence[CorpusItem], int], Predictor]


class NotEnoughSamplesPerClass(ValueError):
    pass


@dataclass(frozen=True)
class EvaluationReport:
    accuracy: float
    precision: dict[EmotionLabel, float]
    recall: dict[EmotionLabel, float]
    f1: dict[EmotionLabel, float]
    confusion: np.ndarray  # rows: true label, cols: predicted, in LABEL_ORDER
    folds: int


def confusion_matrix(
    y_true: Sequence[EmotionLabel], y_pred: Sequence[EmotionLabel]
) -> np.ndarray:
    matrix = np.zeros((len(LABEL_ORDER), len(LABEL_ORDER)), dtype=int)
    for t, p in zip(y_true, y_pred):
        matrix[_LABEL_INDEX[t], _LABEL_INDEX[p]] += 1
    return matrix


def classification_report(
    y_true: Sequence[EmotionLabel], y_pred: Sequence[EmotionLabel]
) -> dict:
    """Accuracy and per-class precision/recall/F1 for one prediction set."""
    matrix = confusion_matrix(y_true, y_pred)
    accuracy = float(np.trace(matrix)) / max(1, matrix.sum())
    precision, recall, f1 = {}, {}, {}
    for i, label in enumerate(LABEL_ORDER):
        tp = matrix[i, i]
        predicted = matrix[:, i].sum()
        actual = matrix[i, :].sum()
        p = tp / predicted if predicted else 0.0
        r = tp / actual if actual else 0.0
        precision[label] = float(p)
        recall[label] = float(r)
        f1[label] = float(2 * p * r / (p + r)) if (p + r) else 0.0
    return {
        "accuracy": accuracy,
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "confusion": matrix,
    }


def _default_factory(train_items: Sequence[CorpusItem], seed: int) -> Predictor:
    x = np.stack([extract_features(item.clip).as_array() for item in train_items])
    model = train_on_features(x, [item.label for item in train_items], seed=seed)

    def predict(items: Sequence[CorpusItem]) -> list[EmotionLabel]:
        labels = []
        for item in items:
            scores = model.classify(extract_features(item.clip))
            labels.append(max(LABEL_ORDER, key=lambda l: scores[l]))
        return labels

    return predict


def stratified_folds(
    labels: Sequence[EmotionLabel], k: int, seed: int
) -> list[list[int]]:
    """Deal each class's (shuffled) indices round-robin into k folds."""
    counts = Counter(labels)
    short = {label.value: n for label, n in counts.items() if n < k}
    if short:
        raise NotEnoughSamplesPerClass(
            f"need >= {k} items per class for {k}-fold CV, got {short}"
        )
    rng = np.random.default_rng(seed)
    by_label = defaultdict(list)
    for i, label in enumerate(labels):
        by_label[label].append(i)
    folds: list[list[int]] = [[] for _ in range(k)]
    for label in LABEL_ORDER:
        idx = by_label.get(label, [])
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            folds[j % k].append(i)
    return folds


def evaluate(
    corpus: Corpus,
    k: int = 5,
    seed: int = 0,
    predictor_factory: PredictorFactory | None = None,
) -> EvaluationReport:
    if k < 2:
        raise ValueError("k must be >= 2")
    factory = predictor_factory or _default_factory
    labels = corpus.labels()
    folds = stratified_folds(labels, k, seed)

    accuracies = []
    per_class = {metric: defaultdict(list) for metric in ("precision", "recall", "f1")}
    total_confusion = np.zeros((len(LABEL_ORDER), len(LABEL_ORDER)), dtype=int)
    for fold in folds:
        held_out = set(fold)
        train_items = [item for i, item in enumerate(corpus.items) if i not in held_out]
        test_items = [corpus.items[i] for i in fold]
        predictor = factory(train_items, seed)
        y_pred = predictor(test_items)
        y_true = [item.label for item in test_items]
        report = classification_report(y_true, y_pred)
        accuracies.append(report["accuracy"])
        for metric in ("precision", "recall", "f1"):
            for label in LABEL_ORDER:
                per_class[metric][label].append(report[metric][label])
        total_confusion += report["confusion"]

    return EvaluationReport(
        accuracy=float(np.mean(accuracies)),
        precision={l: float(np.mean(v)) for l, v in per_class["precision"].items()},
        recall={l: float(np.mean(v)) for l, v in per_class["recall"].items()},
        f1={l: float(np.mean(v)) for l, v in per_class["f1"].items()},
        confusion=total_confusion,
        folds=k,
    )
