"""Conversation threads, the LLM provider contract and the response envelope.

An assistant reply is an envelope: intro text, an optional product block
(a JSON array of at most 3 catalog products on its own lines) and outro
text. Threads are append-only; each message is persisted as one JSON line
when a store directory is configured.
"""
from __future__ import annotations

import json
import logging
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

from emoshop.catalog import Catalog, Product
from emoshop.emotions import EmotionLabel
from emoshop.policy import PolicyDirective, render_system_prompt
from emoshop import prompts

logger = logging.getLogger(__name__)

MAX_PRODUCTS = 3
DEFAULT_MAX_MESSAGES = 200

_PRODUCT_KEYS = ("id", "name", "price", "image_ref", "url")


class DialogueError(Exception):
    pass


class EnvelopeInvalid(DialogueError):
    def __init__(self, defect: str):
        super().__init__(f"invalid response envelope: {defect}")
        self.defect = defect


class ProviderUnavailable(DialogueError):
    pass


class StorageUnavailable(DialogueError):
    pass


class ThreadFull(DialogueError):
    pass


@dataclass(frozen=True)
class ResponseEnvelope:
    intro: str
    products: tuple[Product, ...] = ()
    outro: str = ""

    def __post_init__(self):
        object.__setattr__(self, "products", tuple(self.products))
        if len(self.products) > MAX_PRODUCTS:
            raise EnvelopeInvalid(f"too many products: {len(self.products)}")

    def reply_text(self) -> str:
        """Spoken-reply text: intro and outro only, never the product block."""
        return "\n".join(part for part in (self.intro, self.outro) if part)


@dataclass(frozen=True)
class Message:
    role: str  # "user" | "assistant"
    modality: str  # "text" | "voice" | "image"
    content: str
    detected_emotion: EmotionLabel | None = None
    envelope: ResponseEnvelope | None = None
    timestamp: float = field(default_factory=time.time)

    def to_record(self) -> dict:
        record = {
            "role": self.role,
            "modality": self.modality,
            "content": self.content,
            "timestamp": self.timestamp,
        }
        if self.detected_emotion is not None:
            record["detected_emotion"] = self.detected_emotion.value
        if self.envelope is not None:
            record["envelope"] = {
                "intro": self.envelope.intro,
                "products": [_product_record(p) for p in self.envelope.products],
                "outro": self.envelope.outro,
            }
        return record


@dataclass
class ConversationThread:
    id: str
    created_at: float = field(default_factory=time.time)
    messages: list[Message] = field(default_factory=list)

    def transcript(self) -> list[tuple[str, str]]:
        """Canonical (role, content) pairs, timestamp-free, for replay checks."""
        return [(m.role, m.content) for m in self.messages]


class ThreadStore:
    """In-memory thread registry with optional per-thread append-only logs."""

    def __init__(self, persist_dir: str | Path | None = None):
        self._threads: dict[str, ConversationThread] = {}
        self._dir = Path(persist_dir) if persist_dir else None
        if self._dir is not None:
            try:
                self._dir.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise StorageUnavailable(str(exc)) from exc
            self._load_existing()

    def _log_path(self, thread_id: str) -> Path:
        assert self._dir is not None
        return self._dir / f"{thread_id}.ndjson"

    def _load_existing(self) -> None:
        assert self._dir is not None
        for path in sorted(self._dir.glob("*.ndjson")):
            lines = path.read_text(encoding="utf-8").splitlines()
            if not lines:
                continue
            meta = json.loads(lines[0])
            thread = ConversationThread(id=meta["thread"], created_at=meta["created_at"])
            for line in lines[1:]:
                thread.messages.append(_message_from_record(json.loads(line)))
            self._threads[thread.id] = thread

    def create_thread(self) -> ConversationThread:
        thread = ConversationThread(id=uuid.uuid4().hex)
        self._threads[thread.id] = thread
        if self._dir is not None:
            try:
                with open(self._log_path(thread.id), "a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"thread": thread.id, "created_at": thread.created_at}) + "\n")
            except OSError as exc:
                raise StorageUnavailable(str(exc)) from exc
        return thread

    def get(self, thread_id: str) -> ConversationThread | None:
        return self._threads.get(thread_id)

    def append(self, thread: ConversationThread, message: Message) -> None:
        thread.messages.append(message)
        if self._dir is not None:
            with open(self._log_path(thread.id), "a", encoding="utf-8") as fh:
                fh.write(json.dumps(message.to_record()) + "\n")


class LlmProvider(Protocol):
    def respond(self, system_prompt: str, history: Sequence[Message]) -> str: ...


class ScriptedLlmProvider:
    """Deterministic mock: replies come from a fixed script, calls are recorded."""

    def __init__(self, replies: Sequence[str]):
        self._replies = list(replies)
        self._cursor = 0
        self.calls: list[tuple[str, list[tuple[str, str]]]] = []

    def respond(self, system_prompt: str, history: Sequence[Message]) -> str:
        self.calls.append((system_prompt, [(m.role, m.content) for m in history]))
        if self._cursor >= len(self._replies):
            raise ProviderUnavailable("scripted replies exhausted")
        reply = self._replies[self._cursor]
        self._cursor += 1
        return reply


class KeywordLlmProvider:
    """Offline stand-in for a live LLM: keyword search over the catalog.

    Deterministic and self-contained, so `serve --mock` gives a working
    end-to-end demo without network access.
    """

    def __init__(self, catalog: Catalog, max_products: int = MAX_PRODUCTS):
        self._catalog = catalog
        self._max_products = max_products

    def respond(self, system_prompt: str, history: Sequence[Message]) -> str:
        from emoshop.catalog import AttributeQuery, search

        last_user = next((m for m in reversed(history) if m.role == "user"), None)
        if last_user is None or not last_user.content.strip():
            return "How can I help you shop today?"
        terms = tuple(t for t in last_user.content.lower().split() if len(t) > 2)
        hits = search(
            self._catalog, AttributeQuery(name_terms=terms, limit=self._max_products)
        )
        if not hits:
            return "I could not find matching products. Could you tell me more?"
        envelope = ResponseEnvelope(
            intro="Here is what I found for you:",
            products=tuple(hits),
            outro="Want me to look for anything else?",
        )
        return format_envelope(envelope)


def _product_record(product: Product) -> dict:
    return {
        "id": product.id,
        "name": product.name,
        "price": product.price,
        "image_ref": product.image_ref,
        "url": product.url,
    }


def _message_from_record(record: dict) -> Message:
    envelope = None
    if "envelope" in record:
        env = record["envelope"]
        envelope = ResponseEnvelope(
            intro=env["intro"],
            products=tuple(
                Product(
                    id=p["id"],
                    name=p["name"],
                    brand=p.get("brand", ""),
                    category=p.get("category", ""),
                    price=p["price"],
                    image_ref=p["image_ref"],
                    url=p["url"],
                )
                for p in env["products"]
            ),
            outro=env["outro"],
        )
    emotion = record.get("detected_emotion")
    return Message(
        role=record["role"],
        modality=record["modality"],
        content=record["content"],
        detected_emotion=EmotionLabel(emotion) if emotion else None,
        envelope=envelope,
        timestamp=record["timestamp"],
    )


def format_envelope(envelope: ResponseEnvelope) -> str:
    """Canonical text form: intro, product block on its own lines, outro."""
    if not envelope.products:
        if envelope.outro:
            return f"{envelope.intro}\n{envelope.outro}"
        return envelope.intro
    block = json.dumps([_product_record(p) for p in envelope.products], indent=2)
    return f"{envelope.intro}\n{block}\n{envelope.outro}"


def parse_envelope(raw: str, catalog: Catalog) -> ResponseEnvelope:
    """Split raw assistant text into intro / product block / outro.

    The product block is the first well-formed JSON array found on its own
    lines. Text without a block becomes a plain intro-only envelope.
    """
    if not raw:
        raise EnvelopeInvalid("empty reply")
    lines = raw.split("\n")
    start = None
    for i, line in enumerate(lines):
        if line.lstrip().startswith("["):
            start = i
            break
    if start is None:
        return ResponseEnvelope(intro=raw, products=(), outro="")

    block_items = None
    end = None
    for j in range(start, len(lines)):
        candidate = "\n".join(lines[start : j + 1])
        try:
            block_items = json.loads(candidate)
            end = j
            break
        except json.JSONDecodeError:
            continue
    if block_items is None:
        raise EnvelopeInvalid("unbalanced delimiters in product block")
    if not isinstance(block_items, list):
        raise EnvelopeInvalid("product block is not an array")
    if len(block_items) > MAX_PRODUCTS:
        raise EnvelopeInvalid(f"too many products: {len(block_items)}")

    products = []
    for item in block_items:
        if not isinstance(item, dict):
            raise EnvelopeInvalid("product entry is not an object")
        missing = [key for key in _PRODUCT_KEYS if key not in item]
        if missing:
            raise EnvelopeInvalid(f"product entry missing keys {missing}")
        product = catalog.get(str(item["id"]))
        if product is None:
            raise EnvelopeInvalid(f"unknown product id: {item['id']}")
        products.append(product)

    intro = "\n".join(lines[:start])
    outro = "\n".join(lines[end + 1 :])
    return ResponseEnvelope(intro=intro, products=tuple(products), outro=outro)


def append_and_respond(
    store: ThreadStore,
    thread: ConversationThread,
    user_msg: Message,
    directive: PolicyDirective | None,
    catalog: Catalog,
    provider: LlmProvider,
    base_instructions: str = prompts.BASE_INSTRUCTIONS,
    format_rules: str = prompts.FORMAT_RULES,
    max_messages: int = DEFAULT_MAX_MESSAGES,
) -> Message:
    """Append the user message, query the provider, parse and append the reply.

    A provider failure leaves the thread with the user message appended so
    the turn is retriable. A malformed envelope degrades to a plain-text
    envelope instead of failing mid-chat.
    """
    if user_msg.role != "user":
        raise DialogueError("append_and_respond requires a user message")
    if len(thread.messages) >= max_messages:
        raise ThreadFull(f"thread has reached the {max_messages}-message guard")
    system_prompt = render_system_prompt(base_instructions, directive, format_rules)
    store.append(thread, user_msg)
    try:
        raw = provider.respond(system_prompt, thread.messages)
    except ProviderUnavailable:
        raise
    except Exception as exc:
        raise ProviderUnavailable(str(exc)) from exc
    try:
        envelope = parse_envelope(raw, catalog)
    except EnvelopeInvalid as exc:
        logger.warning("envelope parse failed (%s); falling back to plain text", exc.defect)
        envelope = ResponseEnvelope(intro=raw, products=(), outro="")
    assistant = Message(
        role="assistant",
        modality="text",
        content=raw,
        envelope=envelope,
    )
    store.append(thread, assistant)
    return assistant
