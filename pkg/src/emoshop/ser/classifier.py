"""Multinomial softmax classifier over engineered acoustic features.

Deliberately small: standardized inputs, full-batch gradient descent with a
fixed iteration budget, zero initialization. Training is exactly
reproducible and the loss gradient is checkable by finite differences.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from emoshop.emotions import LABEL_ORDER, EmotionLabel, EmotionScores
from emoshop.ser.corpus import Corpus
from emoshop.ser.features import FeatureVector, extract_features

N_CLASSES = len(LABEL_ORDER)
_LABEL_INDEX = {label: i for i, label in enumerate(LABEL_ORDER)}

LEARNING_RATE = 0.5
ITERATIONS = 500
L2_PENALTY = 1e-4
STD_FLOOR = 1e-8


class InsufficientData(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def loss_and_gradient(
    weights: np.ndarray, bias: np.ndarray, x: np.ndarray, y: np.ndarray, l2: float = L2_PENALTY
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy with L2 on weights; returns (loss, dW, db)."""
    n = len(x)
    probs = softmax(x @ weights + bias)
    loss = -np.log(np.maximum(probs[np.arange(n), y], 1e-300)).mean()
    loss += 0.5 * l2 * np.sum(weights**2)
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    grad_w = x.T @ delta / n + l2 * weights
    grad_b = delta.mean(axis=0)
    return float(loss), grad_w, grad_b


@dataclass(frozen=True)
class EmotionClassifier:
    weights: np.ndarray  # (dim, 7)
    bias: np.ndarray  # (7,)
    feature_mean: np.ndarray
    feature_std: np.ndarray

    @property
    def dimension(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def uniform(cls, dimension: int) -> "EmotionClassifier":
        """All-zero parameters: every input scores 1/7 per label."""
        return cls(
            weights=np.zeros((dimension, N_CLASSES)),
            bias=np.zeros(N_CLASSES),
            feature_mean=np.zeros(dimension),
            feature_std=np.ones(dimension),
        )

    def classify(self, features: FeatureVector | np.ndarray) -> EmotionScores:
        x = features.as_array() if isinstance(features, FeatureVector) else np.asarray(features)
        if x.shape != (self.dimension,):
            raise DimensionMismatch(
                f"expected feature dimension {self.dimension}, got {x.shape}"
            )
        z = (x - self.feature_mean) / self.feature_std
        probs = softmax(z @ self.weights + self.bias)
        return {label: float(probs[i]) for i, label in enumerate(LABEL_ORDER)}

    def save(self, path: str | Path) -> None:
        payload = {
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "feature_mean": self.feature_mean.tolist(),
            "feature_std": self.feature_std.tolist(),
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "EmotionClassifier":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            weights=np.array(payload["weights"]),
            bias=np.array(payload["bias"]),
            feature_mean=np.array(payload["feature_mean"]),
            feature_std=np.array(payload["feature_std"]),
        )


def train_on_features(
    x: np.ndarray, labels: list[EmotionLabel], seed: int = 0
) -> EmotionClassifier:
    """Fit the softmax model on a (n, dim) feature matrix."""
    if len(set(labels)) < 2:
        raise InsufficientData("need at least 2 distinct labels to train")
    y = np.array([_LABEL_INDEX[label] for label in labels])
    mean = x.mean(axis=0)
    std = np.maximum(x.std(axis=0), STD_FLOOR)
    z = (x - mean) / std

    weights = np.zeros((x.shape[1], N_CLASSES))
    bias = np.zeros(N_CLASSES)
    for _ in range(ITERATIONS):
        _, grad_w, grad_b = loss_and_gradient(weights, bias, z, y)
        weights -= LEARNING_RATE * grad_w
        bias -= LEARNING_RATE * grad_b
    return EmotionClassifier(weights=weights, bias=bias, feature_mean=mean, feature_std=std)


def train(corpus: Corpus, seed: int = 0) -> EmotionClassifier:
    """Extract features for every corpus item and fit the classifier."""
    if not corpus.items:
        raise InsufficientData("corpus is empty")
    x = np.stack([extract_features(item.clip).as_array() for item in corpus.items])
    return train_on_features(x, [item.label for item in corpus.items], seed=seed)
