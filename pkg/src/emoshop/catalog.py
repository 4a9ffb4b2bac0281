"""Product catalog: ingestion, attribute search and cheaper-alternative lookup.

The catalog is an immutable in-memory index loaded from a JSON array file.
Search is deterministic: filter by every present constraint, rank by a
simple additive relevance score, break ties by ascending price then id.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path


class CatalogError(Exception):
    pass


class ParseError(CatalogError):
    def __init__(self, reason: str, offset: int = 0):
        super().__init__(f"catalog parse error at byte {offset}: {reason}")
        self.reason = reason
        self.offset = offset


class DuplicateId(CatalogError):
    def __init__(self, product_id: str):
        super().__init__(f"duplicate product id: {product_id}")
        self.product_id = product_id


class UnknownProduct(CatalogError):
    def __init__(self, product_id: str):
        super().__init__(f"unknown product id: {product_id}")
        self.product_id = product_id


@dataclass(frozen=True)
class Product:
    id: str
    name: str
    brand: str
    category: str
    price: float
    image_ref: str
    url: str
    color: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("product id must be non-empty")
        if not self.name:
            raise ValueError("product name must be non-empty")
        if self.price < 0:
            raise ValueError(f"price must be >= 0, got {self.price}")


@dataclass(frozen=True)
class AttributeQuery:
    name_terms: tuple[str, ...] = ()
    brand: str | None = None
    category: str | None = None
    min_price: float | None = None
    max_price: float | None = None
    color: str | None = None
    reference_product: str | None = None
    limit: int = 3

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError("limit must be >= 1")
        if (
            self.min_price is not None
            and self.max_price is not None
            and self.min_price > self.max_price
        ):
            raise ValueError("min_price must not exceed max_price")
        object.__setattr__(self, "name_terms", tuple(self.name_terms))


@dataclass(frozen=True)
class Catalog:
    products: tuple[Product, ...]
    loaded_at: float = field(default_factory=time.time)

    def __post_init__(self):
        object.__setattr__(self, "products", tuple(self.products))
        by_id = {}
        for product in self.products:
            if product.id in by_id:
                raise DuplicateId(product.id)
            by_id[product.id] = product
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self) -> int:
        return len(self.products)

    def get(self, product_id: str) -> Product | None:
        return self._by_id.get(product_id)

    def require(self, product_id: str) -> Product:
        product = self._by_id.get(product_id)
        if product is None:
            raise UnknownProduct(product_id)
        return product


_REQUIRED_KEYS = ("id", "name", "brand", "category", "price", "image_ref", "url")


def ingest_catalog(source: str | Path) -> Catalog:
    """Load a catalog file (JSON array of product objects).

    Any malformed record fails the whole file: ingestion is all-or-nothing so
    the catalog state is never ambiguous.
    """
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(str(path))
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, offset=exc.pos) from exc
    if not isinstance(raw, list):
        raise ParseError("top-level value must be an array")
    products = []
    for index, record in enumerate(raw):
        if not isinstance(record, dict):
            raise ParseError(f"record {index} is not an object")
        missing = [key for key in _REQUIRED_KEYS if key not in record]
        if missing:
            raise ParseError(f"record {index} missing keys {missing}")
        if not isinstance(record["price"], (int, float)) or isinstance(record["price"], bool):
            raise ParseError(f"record {index}: price must be a number")
        try:
            products.append(
                Product(
                    id=str(record["id"]),
                    name=str(record["name"]),
                    brand=str(record["brand"]),
                    category=str(record["category"]),
                    price=float(record["price"]),
                    color=record.get("color"),
                    image_ref=str(record["image_ref"]),
                    url=str(record["url"]),
                )
            )
        except ValueError as exc:
            raise ParseError(f"record {index}: {exc}") from exc
    return Catalog(products=tuple(products))


def _fold(text: str) -> str:
    return text.casefold()


def _matches(product: Product, query: AttributeQuery) -> bool:
    """True when the product satisfies every constraint present in the query."""
    if query.brand is not None and _fold(product.brand) != _fold(query.brand):
        return False
    if query.category is not None and _fold(product.category) != _fold(query.category):
        return False
    if query.color is not None:
        if product.color is None or _fold(product.color) != _fold(query.color):
            return False
    if query.min_price is not None and product.price < query.min_price:
        return False
    if query.max_price is not None and product.price > query.max_price:
        return False
    if query.name_terms:
        haystack = _fold(f"{product.name} {product.brand} {product.category}")
        if not all(_fold(term) in haystack for term in query.name_terms):
            return False
    return True


def relevance_score(product: Product, query: AttributeQuery) -> int:
    """Matched name tokens plus one point per satisfied optional constraint."""
    haystack = _fold(f"{product.name} {product.brand} {product.category}")
    score = sum(1 for term in query.name_terms if _fold(term) in haystack)
    if query.brand is not None:
        score += 1
    if query.category is not None:
        score += 1
    if query.color is not None:
        score += 1
    if query.min_price is not None:
        score += 1
    if query.max_price is not None:
        score += 1
    return score


def search(catalog: Catalog, query: AttributeQuery) -> list[Product]:
    """Ranked attribute search; at most `query.limit` results."""
    hits = [p for p in catalog.products if _matches(p, query)]
    hits.sort(key=lambda p: (-relevance_score(p, query), p.price, p.id))
    return hits[: query.limit]


def cheaper_alternatives(catalog: Catalog, reference: str, limit: int = 3) -> list[Product]:
    """Products in the reference's category strictly cheaper than it.

    Ranked by shared attributes with the reference (brand, color), then by
    descending price so the closest cheaper option comes first.
    """
    ref = catalog.require(reference)

    def shared(product: Product) -> int:
        score = 0
        if _fold(product.brand) == _fold(ref.brand):
            score += 1
        if product.color and ref.color and _fold(product.color) == _fold(ref.color):
            score += 1
        return score

    hits = [
        p
        for p in catalog.products
        if p.id != ref.id
        and _fold(p.category) == _fold(ref.category)
        and p.price < ref.price
    ]
    hits.sort(key=lambda p: (-shared(p), -p.price, p.id))
    return hits[:limit]
