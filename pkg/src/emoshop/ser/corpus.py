"""Labeled audio corpus loading.

A corpus directory holds WAV files plus a `manifest.csv` mapping
`filename,label`; labels must come from the closed emotion set.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from emoshop.audio import AudioClip, UnreadableAudio, read_wav
from emoshop.emotions import EmotionLabel

MANIFEST_NAME = "manifest.csv"


class MissingManifest(FileNotFoundError):
    pass


class UnknownLabel(ValueError):
    def __init__(self, label: str):
        super().__init__(f"unknown emotion label: {label!r}")
        self.label = label


@dataclass(frozen=True)
class CorpusItem:
    clip: AudioClip
    label: EmotionLabel
    speaker: str | None = None
    language: str | None = None


@dataclass(frozen=True)
class Corpus:
    items: tuple[CorpusItem, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def __len__(self) -> int:
        return len(self.items)

    def labels(self) -> list[EmotionLabel]:
        return [item.label for item in self.items]


def parse_label(raw: str) -> EmotionLabel:
    try:
        return EmotionLabel(raw.strip().lower())
    except ValueError:
        raise UnknownLabel(raw.strip()) from None


def load_corpus(root: str | Path) -> Corpus:
    root = Path(root)
    manifest = root / MANIFEST_NAME
    if not manifest.exists():
        raise MissingManifest(str(manifest))
    items = []
    with open(manifest, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            if row[0].strip().lower() == "filename":  # optional header
                continue
            if len(row) < 2:
                raise UnknownLabel("")
            filename, label_raw = row[0].strip(), row[1]
            label = parse_label(label_raw)
            wav_path = root / filename
            if not wav_path.exists():
                raise UnreadableAudio(f"missing audio file: {wav_path}")
            items.append(CorpusItem(clip=read_wav(str(wav_path)), label=label))
    return Corpus(items=tuple(items))
