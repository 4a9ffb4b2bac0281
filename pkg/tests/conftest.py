"""Shared fixtures: synthetic catalogs, tone clips and toy corpora."""
from __future__ import annotations

import json

import numpy as np
import pytest

from emoshop.audio import AudioClip
from emoshop.catalog import Catalog, Product
from emoshop.emotions import EmotionLabel
from emoshop.ser.corpus import Corpus, CorpusItem

BRANDS = ("Maison", "Rive", "Atelier", "Nord", "Lumen")
CATEGORIES = ("bag", "shoe", "scarf", "coat", "watch")
COLORS = ("red", "blue", "black", "white", None)


def build_products(n: int, seed: int = 0) -> list[Product]:
    rng = np.random.default_rng(seed)
    products = []
    for i in range(n):
        brand = BRANDS[rng.integers(len(BRANDS))]
        category = CATEGORIES[rng.integers(len(CATEGORIES))]
        color = COLORS[rng.integers(len(COLORS))]
        products.append(
            Product(
                id=f"p{i:04d}",
                name=f"{brand} {category} {i}",
                brand=brand,
                category=category,
                price=float(np.round(rng.uniform(5, 500), 2)),
                color=color,
                image_ref=f"images/p{i:04d}.png",
                url=f"https://example.test/p{i:04d}",
            )
        )
    return products


def product_to_json(product: Product) -> dict:
    record = {
        "id": product.id,
        "name": product.name,
        "brand": product.brand,
        "category": product.category,
        "price": product.price,
        "image_ref": product.image_ref,
        "url": product.url,
    }
    if product.color is not None:
        record["color"] = product.color
    return record


@pytest.fixture
def synthetic_catalog() -> Catalog:
    return Catalog(products=tuple(build_products(200, seed=7)))


@pytest.fixture
def catalog_file(tmp_path):
    def write(products: list[Product]) -> str:
        path = tmp_path / "catalog.json"
        path.write_text(
            json.dumps([product_to_json(p) for p in products]), encoding="utf-8"
        )
        return str(path)

    return write


def sine_clip(
    freq: float, amp: float = 0.5, duration: float = 1.0, sr: int = 16000, noise: float = 0.0, seed: int = 0
) -> AudioClip:
    t = np.arange(int(sr * duration)) / sr
    samples = amp * np.sin(2 * np.pi * freq * t)
    if noise:
        rng = np.random.default_rng(seed)
        samples = samples + noise * rng.normal(size=len(t))
    return AudioClip(samples=np.clip(samples, -1, 1), sample_rate=sr)


def separable_corpus(per_class: int = 9) -> Corpus:
    """Two acoustically separated classes: high-pitch/loud vs low-pitch/quiet."""
    items = []
    for i in range(per_class):
        items.append(
            CorpusItem(
                clip=sine_clip(280 + 10 * i, amp=0.8, duration=0.5, noise=0.001, seed=i),
                label=EmotionLabel.HAPPINESS,
            )
        )
        items.append(
            CorpusItem(
                clip=sine_clip(90 + 5 * i, amp=0.1, duration=0.5, noise=0.001, seed=100 + i),
                label=EmotionLabel.SADNESS,
            )
        )
    return Corpus(items=tuple(items))
