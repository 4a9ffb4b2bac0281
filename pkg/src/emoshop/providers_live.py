"""Live HTTP provider clients.

Each client honors the same contract as its offline mock. API keys are read
from environment variables at call time and are never logged or persisted.
These clients are thin JSON-over-HTTP adapters; offline mocks remain the
default everywhere.
"""
from __future__ import annotations

import base64
import json
import os
import urllib.request
from typing import Sequence

from emoshop.audio import AudioClip, read_wav, write_wav_bytes
from emoshop.dialogue import Message, ProviderUnavailable
from emoshop.emotions import EmotionLabel, EmotionScores
from emoshop.speechio import TranscriptionFailed

DEFAULT_TIMEOUT = 30.0


def _post_json(url: str, payload: dict, api_key: str, timeout: float = DEFAULT_TIMEOUT) -> dict:
    request = urllib.request.Request(
        url,
        data=json.dumps(payload).encode("utf-8"),
        headers={
            "Content-Type": "application/json",
            "Authorization": f"Bearer {api_key}",
        },
        method="POST",
    )
    with urllib.request.urlopen(request, timeout=timeout) as response:
        return json.loads(response.read().decode("utf-8"))


def _require_key(env_var: str) -> str:
    key = os.environ.get(env_var, "")
    if not key:
        raise ProviderUnavailable(f"missing API key in ${env_var}")
    return key


class HttpLlmProvider:
    """Chat-completion style client: sends the system prompt plus history."""

    def __init__(self, url: str, model: str, key_env: str = "EMOSHOP_LLM_API_KEY"):
        self.url = url
        self.model = model
        self.key_env = key_env

    def respond(self, system_prompt: str, history: Sequence[Message]) -> str:
        key = _require_key(self.key_env)
        messages = [{"role": "system", "content": system_prompt}]
        messages += [{"role": m.role, "content": m.content} for m in history]
        try:
            data = _post_json(self.url, {"model": self.model, "messages": messages}, key)
            return data["choices"][0]["message"]["content"]
        except ProviderUnavailable:
            raise
        except Exception as exc:
            raise ProviderUnavailable(str(exc)) from exc


class HttpSttProvider:
    """Transcription client: posts WAV audio, expects {"text": ...}."""

    def __init__(self, url: str, key_env: str = "EMOSHOP_STT_API_KEY"):
        self.url = url
        self.key_env = key_env

    def transcribe(self, clip: AudioClip) -> str:
        key = _require_key(self.key_env)
        payload = {"audio_wav_base64": base64.b64encode(write_wav_bytes(clip)).decode()}
        try:
            return _post_json(self.url, payload, key)["text"]
        except Exception as exc:
            raise TranscriptionFailed(str(exc)) from exc


class HttpTtsProvider:
    """Speech synthesis client: posts text, expects base64 WAV audio."""

    def __init__(self, url: str, voice: str = "default", key_env: str = "EMOSHOP_TTS_API_KEY"):
        self.url = url
        self.voice = voice
        self.key_env = key_env

    def synthesize(self, text: str) -> AudioClip:
        key = _require_key(self.key_env)
        data = _post_json(self.url, {"text": text, "voice": self.voice}, key)
        return read_wav(base64.b64decode(data["audio_wav_base64"]))


class HttpEmotionScorer:
    """Emotion analysis client: posts audio plus language/service parameters."""

    def __init__(
        self,
        url: str,
        language: str = "en",
        service_params: dict | None = None,
        key_env: str = "EMOSHOP_EMOTION_API_KEY",
    ):
        self.url = url
        self.language = language
        self.service_params = service_params or {}
        self.key_env = key_env

    def score(self, clip: AudioClip) -> EmotionScores:
        key = _require_key(self.key_env)
        payload = {
            "audio_wav_base64": base64.b64encode(write_wav_bytes(clip)).decode(),
            "language": self.language,
            "parameters": self.service_params,
        }
        data = _post_json(self.url, payload, key)
        return {EmotionLabel(name): float(value) for name, value in data["scores"].items()}
