"""Emotion-aware conversational shopping assistant engine."""

__version__ = "0.1.0"
