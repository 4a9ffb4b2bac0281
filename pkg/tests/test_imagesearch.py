import io

import numpy as np
import pytest
from PIL import Image

from emoshop.catalog import Catalog, Product
from emoshop.imagesearch import (
    ANALYSIS_SIZE,
    EmptyImageIndex,
    ImageDescriptor,
    ImageIndex,
    PixelL1Metric,
    PyramidMetric,
    UndecodableImage,
    describe,
)


def png_bytes(array: np.ndarray) -> bytes:
    image = Image.fromarray(array.astype(np.uint8), mode="L")
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()


def random_image(rng, size=96) -> bytes:
    return png_bytes(rng.integers(0, 256, size=(size, size)))


def random_descriptor(rng) -> ImageDescriptor:
    return ImageDescriptor(
        width=64, height=64, luma=rng.random((ANALYSIS_SIZE, ANALYSIS_SIZE))
    )


class TestDescribe:
    def test_uniform_white(self):
        desc = describe(png_bytes(np.full((32, 32), 255)))
        assert np.allclose(desc.luma, 1.0)
        assert desc.luma.shape == (ANALYSIS_SIZE, ANALYSIS_SIZE)

    def test_deterministic(self):
        rng = np.random.default_rng(0)
        data = random_image(rng)
        a, b = describe(data), describe(data)
        assert np.array_equal(a.luma, b.luma)

    def test_checkerboard_matches_box_filter_oracle(self):
        rng = np.random.default_rng(1)
        # arbitrary 128x128 content: 2x downscale bilinear == 2x2 box filter
        grid = rng.integers(0, 256, size=(128, 128))
        desc = describe(png_bytes(grid))
        oracle = (grid / 255.0).reshape(64, 2, 64, 2).mean(axis=(1, 3))
        assert np.abs(desc.luma - oracle).max() < 1e-6

    def test_undecodable(self):
        with pytest.raises(UndecodableImage):
            describe(b"definitely not an image")


class TestPyramidMetric:
    def test_self_distance_zero(self):
        rng = np.random.default_rng(2)
        metric = PyramidMetric()
        for _ in range(10):
            d = random_descriptor(rng)
            assert metric.distance(d, d) == 0.0

    def test_symmetric_and_nonnegative(self):
        rng = np.random.default_rng(3)
        metric = PyramidMetric()
        for _ in range(20):
            a, b = random_descriptor(rng), random_descriptor(rng)
            assert metric.distance(a, b) == pytest.approx(metric.distance(b, a))
            assert metric.distance(a, b) >= 0.0
            assert np.isfinite(metric.distance(a, b))

    def test_black_vs_white_is_one(self):
        black = ImageDescriptor(64, 64, np.zeros((ANALYSIS_SIZE, ANALYSIS_SIZE)))
        white = ImageDescriptor(64, 64, np.ones((ANALYSIS_SIZE, ANALYSIS_SIZE)))
        # hand computation: |0-1| averages to 1 at every pyramid level
        assert PyramidMetric().distance(black, white) == pytest.approx(1.0)


def build_image_catalog(tmp_path, n=50, seed=5):
    rng = np.random.default_rng(seed)
    products, images = [], {}
    for i in range(n):
        data = random_image(rng)
        path = tmp_path / f"img{i:03d}.png"
        path.write_bytes(data)
        pid = f"v{i:03d}"
        products.append(
            Product(
                id=pid, name=f"item {i}", brand="B", category="bag",
                price=float(10 + i), image_ref=str(path), url="u",
            )
        )
        images[pid] = data
    return Catalog(products=tuple(products)), images


class TestFindSimilar:
    def test_identity_query_first_with_zero_distance(self, tmp_path):
        catalog, images = build_image_catalog(tmp_path, n=10)
        index = ImageIndex.build(catalog)
        hits = index.find_similar(catalog, images["v003"], k=3)
        assert hits[0][0].id == "v003"
        assert hits[0][1] == 0.0

    def test_matches_exhaustive_oracle(self, tmp_path):
        catalog, images = build_image_catalog(tmp_path, n=50)
        index = ImageIndex.build(catalog)
        rng = np.random.default_rng(9)
        query = random_image(rng)
        hits = index.find_similar(catalog, query, k=50)

        metric = PyramidMetric()
        q = describe(query)
        oracle = sorted(
            ((p, metric.distance(q, describe(images[p.id]))) for p in catalog.products),
            key=lambda pair: (pair[1], pair[0].id),
        )
        assert [(p.id, pytest.approx(d)) for p, d in oracle] == [
            (p.id, d) for p, d in hits
        ]

    def test_k_larger_than_catalog(self, tmp_path):
        catalog, images = build_image_catalog(tmp_path, n=5)
        index = ImageIndex.build(catalog)
        hits = index.find_similar(catalog, images["v000"], k=99)
        assert len(hits) == 5
        assert [d for _, d in hits] == sorted(d for _, d in hits)

    def test_swap_in_pixel_l1_metric(self, tmp_path):
        catalog, images = build_image_catalog(tmp_path, n=8)
        index = ImageIndex.build(catalog)
        hits = index.find_similar(catalog, images["v002"], k=8, metric=PixelL1Metric())
        assert hits[0][0].id == "v002"
        assert [d for _, d in hits] == sorted(d for _, d in hits)

    def test_unresolvable_images_skipped(self, tmp_path):
        catalog, images = build_image_catalog(tmp_path, n=3)
        broken = Product(
            id="broken", name="broken", brand="B", category="bag",
            price=1.0, image_ref=str(tmp_path / "missing.png"), url="u",
        )
        catalog2 = Catalog(products=catalog.products + (broken,))
        index = ImageIndex.build(catalog2)
        assert len(index) == 3

    def test_empty_index(self):
        with pytest.raises(EmptyImageIndex):
            ImageIndex({}).find_similar(
                Catalog(products=()), b"x", k=1
            )

    def test_cache_round_trip(self, tmp_path):
        catalog, images = build_image_catalog(tmp_path, n=6)
        cache = tmp_path / "index.npz"
        index = ImageIndex.build(catalog, cache_path=cache)
        assert cache.exists()
        reloaded = ImageIndex.build(catalog, cache_path=cache)
        a = index.find_similar(catalog, images["v001"], k=6)
        b = reloaded.find_similar(catalog, images["v001"], k=6)
        assert [(p.id, d) for p, d in a] == [(p.id, d) for p, d in b]
