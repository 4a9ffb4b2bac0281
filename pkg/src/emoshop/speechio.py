"""Voice turn orchestration: audio in, empathic spoken reply out.

Wires the pipeline preprocess -> features -> emotion -> directive ->
transcription -> dialogue -> speech synthesis. Provider contracts for
speech-to-text and text-to-speech come with deterministic offline mocks.
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from emoshop.audio import AudioClip, TARGET_RATE
from emoshop.catalog import Catalog
from emoshop.dialogue import (
    ConversationThread,
    LlmProvider,
    Message,
    ResponseEnvelope,
    ThreadStore,
    append_and_respond,
)
from emoshop.emotions import (
    EmotionLabel,
    EmotionScores,
    dominant_emotion,
    uniform_scores,
)
from emoshop.policy import EmpathyPolicy
from emoshop.ser.classifier import EmotionClassifier
from emoshop.ser.features import extract_features, preprocess

logger = logging.getLogger(__name__)


class SpeechError(Exception):
    pass


class TranscriptionFailed(SpeechError):
    pass


class SttProvider(Protocol):
    def transcribe(self, clip: AudioClip) -> str: ...


class TtsProvider(Protocol):
    def synthesize(self, text: str) -> AudioClip: ...


class EmotionScorer(Protocol):
    def score(self, clip: AudioClip) -> EmotionScores: ...


def clip_fingerprint(clip: AudioClip) -> str:
    """SHA-256 over the float32 sample bytes; keys the mock STT table."""
    return hashlib.sha256(np.asarray(clip.samples, dtype=np.float32).tobytes()).hexdigest()


class FingerprintStt:
    """Mock STT: resolves transcripts from a fingerprint -> text table."""

    def __init__(self, table: dict[str, str]):
        self._table = dict(table)

    @classmethod
    def from_file(cls, path: str | Path) -> "FingerprintStt":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def transcribe(self, clip: AudioClip) -> str:
        key = clip_fingerprint(clip)
        if key not in self._table:
            raise TranscriptionFailed(f"no transcript for fingerprint {key[:12]}...")
        return self._table[key]


class StaticStt:
    """Mock STT returning one fixed transcript; handy for offline demos."""

    def __init__(self, transcript: str = "find me a bag"):
        self._transcript = transcript

    def transcribe(self, clip: AudioClip) -> str:
        return self._transcript


class ToneTts:
    """Mock TTS: emits a tone whose duration grows with the text length."""

    SECONDS_PER_CHAR = 0.04

    def synthesize(self, text: str) -> AudioClip:
        duration = max(0.1, self.SECONDS_PER_CHAR * (len(text) + 1))
        n = int(duration * TARGET_RATE)
        t = np.arange(n) / TARGET_RATE
        samples = 0.4 * np.sin(2 * np.pi * 330.0 * t)
        return AudioClip(samples=samples, sample_rate=TARGET_RATE)


class ClassifierScorer:
    """Default scorer: preprocessing + feature extraction + trained classifier."""

    def __init__(self, classifier: EmotionClassifier):
        self._classifier = classifier

    def score(self, clip: AudioClip) -> EmotionScores:
        cleaned = preprocess(clip)
        return self._classifier.classify(extract_features(cleaned))


class FixedScorer:
    """Test scorer returning a constant score map."""

    def __init__(self, scores: EmotionScores):
        self._scores = dict(scores)

    def score(self, clip: AudioClip) -> EmotionScores:
        return dict(self._scores)


@dataclass(frozen=True)
class VoiceTurnResult:
    transcript: str
    emotion: EmotionLabel
    scores: EmotionScores
    assistant_envelope: ResponseEnvelope
    reply_audio: AudioClip


@dataclass
class VoiceDeps:
    stt: SttProvider
    tts: TtsProvider
    scorer: EmotionScorer
    policy: EmpathyPolicy
    llm: LlmProvider
    catalog: Catalog


def handle_voice_message(
    store: ThreadStore,
    thread: ConversationThread,
    audio: AudioClip,
    deps: VoiceDeps,
    threshold: float = 0.5,
) -> VoiceTurnResult:
    """Run one full voice turn.

    Transcription happens before any thread mutation, so a failed turn
    leaves the thread untouched. A scorer failure degrades to neutrality
    rather than blocking the conversation.
    """
    try:
        scores = deps.scorer.score(audio)
        emotion = dominant_emotion(scores, threshold=threshold)
    except Exception:
        logger.warning("emotion scoring failed; degrading to neutrality", exc_info=True)
        scores = uniform_scores()
        emotion = EmotionLabel.NEUTRALITY

    directive = deps.policy.directive_for(emotion)

    try:
        transcript = deps.stt.transcribe(audio)
    except TranscriptionFailed:
        raise
    except Exception as exc:
        raise TranscriptionFailed(str(exc)) from exc

    user_msg = Message(
        role="user",
        modality="voice",
        content=transcript,
        detected_emotion=emotion,
    )
    assistant = append_and_respond(
        store, thread, user_msg, directive, deps.catalog, deps.llm
    )
    assert assistant.envelope is not None
    reply_audio = deps.tts.synthesize(assistant.envelope.reply_text())
    return VoiceTurnResult(
        transcript=transcript,
        emotion=emotion,
        scores=scores,
        assistant_envelope=assistant.envelope,
        reply_audio=reply_audio,
    )
