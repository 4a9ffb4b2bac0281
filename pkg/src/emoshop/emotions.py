"""Emotion labels and score maps shared across the engine.

The label set is closed: the six basic emotions plus neutrality, which is
the fallback returned whenever no emotion clears the detection threshold.
"""
from __future__ import annotations

from enum import Enum


class EmotionLabel(str, Enum):
    HAPPINESS = "happiness"
    SADNESS = "sadness"
    FEAR = "fear"
    DISGUST = "disgust"
    ANGER = "anger"
    SURPRISE = "surprise"
    NEUTRALITY = "neutrality"


# Fixed order used for argmax tie-breaking and for classifier output columns.
LABEL_ORDER: tuple[EmotionLabel, ...] = (
    EmotionLabel.HAPPINESS,
    EmotionLabel.SADNESS,
    EmotionLabel.FEAR,
    EmotionLabel.DISGUST,
    EmotionLabel.ANGER,
    EmotionLabel.SURPRISE,
    EmotionLabel.NEUTRALITY,
)

SCORE_SUM_TOLERANCE = 1e-6


class InvalidScores(ValueError):
    """Raised when an emotion score map violates its invariants."""


EmotionScores = dict[EmotionLabel, float]


def validate_scores(scores: EmotionScores) -> None:
    """Check that all 7 labels are present, each in [0,1], summing to 1."""
    missing = set(LABEL_ORDER) - set(scores)
    if missing:
        raise InvalidScores(f"missing labels: {sorted(l.value for l in missing)}")
    for label, value in scores.items():
        if not 0.0 <= value <= 1.0:
            raise InvalidScores(f"score for {label.value} out of [0,1]: {value}")
    total = sum(scores.values())
    if abs(total - 1.0) > SCORE_SUM_TOLERANCE:
        raise InvalidScores(f"scores sum to {total}, expected 1")


def uniform_scores() -> EmotionScores:
    return {label: 1.0 / len(LABEL_ORDER) for label in LABEL_ORDER}


def dominant_emotion(scores: EmotionScores, threshold: float = 0.5) -> EmotionLabel:
    """Pick the winning label: argmax if it clears the threshold, else neutrality.

    Ties at the maximum are broken by the fixed label order.
    """
    validate_scores(scores)
    best = max(LABEL_ORDER, key=lambda label: scores[label])
    if scores[best] > threshold:
        return best
    return EmotionLabel.NEUTRALITY
