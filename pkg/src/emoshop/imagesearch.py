"""Visual product search: perceptual distance plus nearest-neighbor retrieval.

Images are normalized to a 64x64 grayscale descriptor. The default metric
is the mean absolute difference over a 3-level low-pass pyramid, a
deterministic stand-in for learned perceptual metrics; any object with the
same `distance` contract can be swapped in.
"""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np
from PIL import Image, UnidentifiedImageError

from emoshop.catalog import Catalog, Product

logger = logging.getLogger(__name__)

ANALYSIS_SIZE = 64
PYRAMID_LEVELS = 3
CACHE_FORMAT_TAG = "emoshop-imgidx-v1"


class ImageSearchError(Exception):
    pass


class UndecodableImage(ImageSearchError):
    pass


class EmptyImageIndex(ImageSearchError):
    pass


@dataclass(frozen=True)
class ImageDescriptor:
    width: int
    height: int
    luma: np.ndarray  # (64, 64) floats in [0,1]


class SimilarityMetric(Protocol):
    def distance(self, a: ImageDescriptor, b: ImageDescriptor) -> float: ...


def _bilinear_resize(grid: np.ndarray, size: int) -> np.ndarray:
    """Separable bilinear resampling at pixel centers.

    For an exact 2x downscale this reduces to 2x2 box filtering, which the
    tests exploit as an independent oracle.
    """
    src_h, src_w = grid.shape
    out = np.empty((size, size))
    ys = (np.arange(size) + 0.5) * (src_h / size) - 0.5
    xs = (np.arange(size) + 0.5) * (src_w / size) - 0.5
    y0 = np.clip(np.floor(ys).astype(int), 0, src_h - 1)
    y1 = np.clip(y0 + 1, 0, src_h - 1)
    x0 = np.clip(np.floor(xs).astype(int), 0, src_w - 1)
    x1 = np.clip(x0 + 1, 0, src_w - 1)
    wy = np.clip(ys - y0, 0.0, 1.0)[:, None]
    wx = np.clip(xs - x0, 0.0, 1.0)[None, :]
    top = grid[np.ix_(y0, x0)] * (1 - wx) + grid[np.ix_(y0, x1)] * wx
    bottom = grid[np.ix_(y1, x0)] * (1 - wx) + grid[np.ix_(y1, x1)] * wx
    out = top * (1 - wy) + bottom * wy
    return out


def describe(image_bytes: bytes) -> ImageDescriptor:
    """Decode PNG/JPEG bytes into the fixed-size grayscale descriptor."""
    try:
        with Image.open(io.BytesIO(image_bytes)) as img:
            width, height = img.size
            gray = np.asarray(img.convert("L"), dtype=np.float64) / 255.0
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise UndecodableImage(str(exc)) from exc
    luma = _bilinear_resize(gray, ANALYSIS_SIZE)
    return ImageDescriptor(width=width, height=height, luma=np.clip(luma, 0.0, 1.0))


def _halve(grid: np.ndarray) -> np.ndarray:
    h, w = grid.shape
    return grid.reshape(h // 2, 2, w // 2, 2).mean(axis=(1, 3))


class PyramidMetric:
    """Mean absolute difference over a 3-level 2x2 box-filter pyramid."""

    def distance(self, a: ImageDescriptor, b: ImageDescriptor) -> float:
        ga, gb = a.luma, b.luma
        total = 0.0
        for _ in range(PYRAMID_LEVELS):
            total += float(np.abs(ga - gb).mean())
            ga, gb = _halve(ga), _halve(gb)
        return total / PYRAMID_LEVELS


class PixelL1Metric:
    """Trivial full-resolution L1 metric; used to exercise the metric seam."""

    def distance(self, a: ImageDescriptor, b: ImageDescriptor) -> float:
        return float(np.abs(a.luma - b.luma).mean())


class ImageIndex:
    """Precomputed descriptors for every resolvable catalog product image."""

    def __init__(self, descriptors: dict[str, ImageDescriptor]):
        self._descriptors = dict(descriptors)

    def __len__(self) -> int:
        return len(self._descriptors)

    @classmethod
    def build(
        cls,
        catalog: Catalog,
        image_root: str | Path | None = None,
        cache_path: str | Path | None = None,
    ) -> "ImageIndex":
        """Describe each product image once; unreadable images are skipped."""
        if cache_path is not None and Path(cache_path).exists():
            cached = cls.load_cache(cache_path)
            if set(cached._descriptors) == {p.id for p in catalog.products}:
                return cached
        root = Path(image_root) if image_root else None
        descriptors: dict[str, ImageDescriptor] = {}
        for product in catalog.products:
            ref = Path(product.image_ref)
            if root is not None and not ref.is_absolute():
                ref = root / ref
            try:
                descriptors[product.id] = describe(ref.read_bytes())
            except (OSError, UndecodableImage) as exc:
                logger.warning("skipping image for product %s: %s", product.id, exc)
        index = cls(descriptors)
        if cache_path is not None:
            index.save_cache(cache_path)
        return index

    def save_cache(self, path: str | Path) -> None:
        arrays = {
            f"luma:{pid}": d.luma for pid, d in self._descriptors.items()
        }
        sizes = {
            f"size:{pid}": np.array([d.width, d.height])
            for pid, d in self._descriptors.items()
        }
        np.savez(path, __format__=np.array(CACHE_FORMAT_TAG), **arrays, **sizes)

    @classmethod
    def load_cache(cls, path: str | Path) -> "ImageIndex":
        with np.load(path, allow_pickle=False) as data:
            tag = str(data["__format__"])
            if tag != CACHE_FORMAT_TAG:
                raise ImageSearchError(f"unsupported cache format: {tag}")
            descriptors = {}
            for key in data.files:
                if key.startswith("luma:"):
                    pid = key[len("luma:") :]
                    width, height = data[f"size:{pid}"]
                    descriptors[pid] = ImageDescriptor(
                        width=int(width), height=int(height), luma=data[key]
                    )
        return cls(descriptors)

    def find_similar(
        self,
        catalog: Catalog,
        query_bytes: bytes,
        k: int,
        metric: SimilarityMetric | None = None,
    ) -> list[tuple[Product, float]]:
        """The k nearest catalog products by ascending distance, ties by id."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if not self._descriptors:
            raise EmptyImageIndex("no catalog images were resolvable")
        metric = metric or PyramidMetric()
        query = describe(query_bytes)
        scored = [
            (catalog.require(pid), metric.distance(query, descriptor))
            for pid, descriptor in self._descriptors.items()
        ]
        scored.sort(key=lambda pair: (pair[1], pair[0].id))
        return scored[:k]
