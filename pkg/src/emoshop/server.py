"""HTTP boundary: sessions, text chat, voice turns and image search.

The app is built from an explicit dependency bundle so tests can wire mock
providers; `serve` in the CLI assembles the same bundle from a config file.
Sessions map one-to-one onto conversation threads and requests on the same
session are serialized.
"""
from __future__ import annotations

import base64
import secrets
import threading
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from pydantic import BaseModel

from emoshop.audio import UnreadableAudio, read_wav, write_wav_bytes
from emoshop.catalog import Catalog
from emoshop.dialogue import (
    ConversationThread,
    LlmProvider,
    Message,
    ProviderUnavailable,
    ResponseEnvelope,
    ThreadStore,
)
from emoshop.imagesearch import EmptyImageIndex, ImageIndex, UndecodableImage
from emoshop.policy import EmpathyPolicy
from emoshop.speechio import (
    EmotionScorer,
    SttProvider,
    TranscriptionFailed,
    TtsProvider,
    VoiceDeps,
    handle_voice_message,
)


@dataclass
class ServerConfig:
    bind: str = "127.0.0.1:8080"
    catalog_path: str = "catalog.json"
    policy_path: str | None = None
    provider_mode: str = "mock"  # "mock" | "live"
    classifier_path: str | None = None
    emotion_threshold: float = 0.5
    max_products: int = 3

    def __post_init__(self):
        if not 0.0 < self.emotion_threshold <= 1.0:
            raise ValueError("emotion_threshold must be in (0,1]")
        if not 1 <= self.max_products <= 3:
            raise ValueError("max_products must be in [1,3]")


@dataclass
class AppDeps:
    catalog: Catalog
    policy: EmpathyPolicy
    llm: LlmProvider
    stt: SttProvider
    tts: TtsProvider
    scorer: EmotionScorer
    image_index: ImageIndex | None = None
    store: ThreadStore = field(default_factory=ThreadStore)
    config: ServerConfig = field(default_factory=ServerConfig)


class ChatRequest(BaseModel):
    session_id: str
    text: str


def _envelope_json(envelope: ResponseEnvelope) -> dict:
    return {
        "intro": envelope.intro,
        "products": [
            {
                "id": p.id,
                "name": p.name,
                "price": p.price,
                "image_ref": p.image_ref,
                "url": p.url,
            }
            for p in envelope.products
        ],
        "outro": envelope.outro,
    }


class _Sessions:
    def __init__(self, store: ThreadStore):
        self._store = store
        self._threads: dict[str, ConversationThread] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def create(self) -> str:
        session_id = secrets.token_hex(16)  # 128 bits of entropy
        with self._guard:
            self._threads[session_id] = self._store.create_thread()
            self._locks[session_id] = threading.Lock()
        return session_id

    def thread(self, session_id: str) -> ConversationThread:
        thread = self._threads.get(session_id)
        if thread is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return thread

    def lock(self, session_id: str) -> threading.Lock:
        return self._locks[session_id]


def build_app(deps: AppDeps) -> FastAPI:
    app = FastAPI(title="emoshop")
    sessions = _Sessions(deps.store)
    config = deps.config

    @app.get("/healthz")
    def healthz():
        return {
            "catalog": len(deps.catalog) > 0,
            "image_index": deps.image_index is not None and len(deps.image_index) > 0,
            "providers": True,
        }

    @app.post("/session")
    def create_session():
        return {"session_id": sessions.create()}

    @app.post("/chat")
    def chat(request: ChatRequest):
        if not request.text.strip():
            raise HTTPException(status_code=422, detail="text must be non-empty")
        thread = sessions.thread(request.session_id)
        with sessions.lock(request.session_id):
            user_msg = Message(role="user", modality="text", content=request.text)
            try:
                from emoshop.dialogue import append_and_respond

                assistant = append_and_respond(
                    deps.store, thread, user_msg, None, deps.catalog, deps.llm
                )
            except ProviderUnavailable as exc:
                raise HTTPException(status_code=502, detail=str(exc)) from exc
        assert assistant.envelope is not None
        return {"envelope": _envelope_json(assistant.envelope), "transcriptless": True}

    @app.post("/voice")
    def voice(session_id: str = Form(...), audio: UploadFile = File(...)):
        thread = sessions.thread(session_id)
        raw = audio.file.read()
        try:
            clip = read_wav(raw)
        except UnreadableAudio as exc:
            raise HTTPException(status_code=415, detail=str(exc)) from exc
        voice_deps = VoiceDeps(
            stt=deps.stt,
            tts=deps.tts,
            scorer=deps.scorer,
            policy=deps.policy,
            llm=deps.llm,
            catalog=deps.catalog,
        )
        with sessions.lock(session_id):
            try:
                result = handle_voice_message(
                    deps.store,
                    thread,
                    clip,
                    voice_deps,
                    threshold=config.emotion_threshold,
                )
            except TranscriptionFailed as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            except ProviderUnavailable as exc:
                raise HTTPException(status_code=502, detail=str(exc)) from exc
        return {
            "transcript": result.transcript,
            "emotion": result.emotion.value,
            "scores": {label.value: score for label, score in result.scores.items()},
            "envelope": _envelope_json(result.assistant_envelope),
            "reply_audio_wav_base64": base64.b64encode(
                write_wav_bytes(result.reply_audio)
            ).decode(),
        }

    @app.post("/image")
    def image(
        session_id: str = Form(...),
        image: UploadFile = File(...),
        text: Optional[str] = Form(None),
    ):
        if text is not None and text.strip():
            raise HTTPException(
                status_code=422, detail="image uploads cannot carry text"
            )
        thread = sessions.thread(session_id)
        if deps.image_index is None:
            raise HTTPException(status_code=503, detail="image search not configured")
        raw = image.file.read()
        with sessions.lock(session_id):
            try:
                hits = deps.image_index.find_similar(
                    deps.catalog, raw, k=config.max_products
                )
            except UndecodableImage as exc:
                raise HTTPException(status_code=415, detail=str(exc)) from exc
            except EmptyImageIndex as exc:
                raise HTTPException(status_code=503, detail=str(exc)) from exc
            envelope = ResponseEnvelope(
                intro="Here are the products that look closest to your photo:",
                products=tuple(product for product, _ in hits),
                outro="Would you like more suggestions?",
            )
            deps.store.append(
                thread, Message(role="user", modality="image", content="[image]")
            )
            deps.store.append(
                thread,
                Message(
                    role="assistant",
                    modality="text",
                    content=envelope.intro,
                    envelope=envelope,
                ),
            )
        return {"envelope": _envelope_json(envelope)}

    return app
