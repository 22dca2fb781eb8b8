"""Preprint and outlet-news corpus: ingestion, cleaning, and NDJSON persistence.

The on-disk layout under a data directory is:

    articles.ndjson            one article object per line
    features.ndjson            extracted feature vectors, keyed by article id
    angles.ndjson              cached angle sets, keyed by article id
    outlets.json               outlet roster (id, name, url, outlet_type)
    outlets/<outlet_id>.ndjson historical news items for one outlet
    vectors/<outlet_id>.f32    packed item embeddings (+ .ids sidecar)
    vectors/articles.f32       packed article embeddings (+ .ids sidecar)
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path

import numpy as np

from cnd.angles import AngleSet
from cnd.textfeat import FeatureVector

OUTLET_TYPES = ("general_news", "science_tech_news", "tech_news")

ARTICLE_KEYS = (
    "id",
    "title",
    "abstract",
    "url",
    "primary_category",
    "categories",
    "published_date",
    "full_text",
    "newsworthiness",
)


class InvalidRecordError(ValueError):
    """A record violates the corpus invariants."""


class FeedParseError(ValueError):
    """Raised for malformed feed XML; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class CorpusFormatError(ValueError):
    """Raised when a stored corpus file cannot be loaded; names file and line."""

    def __init__(self, path: Path | str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


def collapse_ws(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return re.sub(r"\s+", " ", text).strip()


@dataclass
class ArticleRecord:
    """One preprint with metadata plus optional derived fields."""

    id: str
    title: str
    abstract: str
    url: str
    primary_category: str
    categories: list[str]
    published_date: date
    full_text: str | None = None
    features: FeatureVector | None = None
    newsworthiness: float | None = None
    angle_cache: AngleSet | None = None

    def validate(self) -> None:
        if not self.id:
            raise InvalidRecordError("article id is empty")
        if not collapse_ws(self.title):
            raise InvalidRecordError(f"article {self.id!r}: empty title")
        if not collapse_ws(self.abstract):
            raise InvalidRecordError(f"article {self.id!r}: empty abstract")
        if self.primary_category not in self.categories:
            raise InvalidRecordError(
                f"article {self.id!r}: primary category {self.primary_category!r} "
                f"not in categories {self.categories!r}"
            )
        if not isinstance(self.published_date, date):
            raise InvalidRecordError(f"article {self.id!r}: published_date is not a date")
        if self.newsworthiness is not None and not 0.0 <= self.newsworthiness <= 100.0:
            raise InvalidRecordError(
                f"article {self.id!r}: newsworthiness {self.newsworthiness} outside [0, 100]"
            )

    def to_json_dict(self) -> dict:
        """The canonical articles.ndjson object (fixed key set, nulls for optionals)."""
        return {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "url": self.url,
            "primary_category": self.primary_category,
            "categories": list(self.categories),
            "published_date": self.published_date.isoformat(),
            "full_text": self.full_text,
            "newsworthiness": self.newsworthiness,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ArticleRecord":
        rec = cls(
            id=obj["id"],
            title=obj["title"],
            abstract=obj["abstract"],
            url=obj["url"],
            primary_category=obj["primary_category"],
            categories=list(obj["categories"]),
            published_date=date.fromisoformat(obj["published_date"]),
            full_text=obj.get("full_text"),
            newsworthiness=obj.get("newsworthiness"),
        )
        rec.validate()
        return rec


@dataclass
class OutletNewsItem:
    """One historical news item published by an outlet."""

    outlet_id: str
    item_id: str
    title: str
    body: str
    published_date: date | None = None

    def validate(self) -> None:
        if not self.outlet_id or not self.item_id:
            raise InvalidRecordError("outlet item missing outlet_id or item_id")
        if not self.body.strip():
            raise InvalidRecordError(
                f"outlet item {self.outlet_id}/{self.item_id}: empty body"
            )

    def to_json_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "title": self.title,
            "body": self.body,
            "published_date": (
                self.published_date.isoformat() if self.published_date else None
            ),
        }

    @classmethod
    def from_json_dict(cls, outlet_id: str, obj: dict) -> "OutletNewsItem":
        raw_date = obj.get("published_date")
        item = cls(
            outlet_id=outlet_id,
            item_id=obj["item_id"],
            title=obj.get("title", ""),
            body=obj["body"],
            published_date=date.fromisoformat(raw_date) if raw_date else None,
        )
        item.validate()
        return item


@dataclass
class OutletProfile:
    """A news outlet plus the embeddings of its historical items.

    ``item_vectors`` is a (count, dim) float32 matrix aligned line-for-line
    with ``vector_ids``; both stay empty until ``cnd embed`` has run.
    """

    outlet_id: str
    name: str
    url: str
    outlet_type: str
    item_vectors: np.ndarray | None = field(default=None, compare=False)
    vector_ids: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if self.outlet_type not in OUTLET_TYPES:
            raise InvalidRecordError(
                f"outlet {self.outlet_id!r}: unknown outlet_type {self.outlet_type!r}"
            )
        if self.item_vectors is not None and self.item_vectors.ndim != 2:
            raise InvalidRecordError(
                f"outlet {self.outlet_id!r}: item_vectors must be a 2-D matrix"
            )


@dataclass
class ParsedFeed:
    """Result of parsing a harvest feed: kept records plus a skip counter."""

    records: list[ArticleRecord]
    skipped: int


def _local(tag: str) -> str:
    """Element tag without its XML namespace."""
    return tag.rsplit("}", 1)[-1]

def _child_text(elem: ET.Element, *names: str) -> str | None:
    """Text of the first descendant matching a name; names are in priority order."""
    for name in names:
        for node in elem.iter():
            if _local(node.tag) == name and node.text and node.text.strip():
                return node.text
    return None


def _record_categories(elem: ET.Element) -> list[str]:
    """Category list for one record element, order preserved.

    Handles both a single space-separated ``categories`` element (OAI arXiv
    metadata) and repeated ``category`` elements with ``term`` attributes
    (Atom-style feeds).
    """
    cats: list[str] = []
    primary: str | None = None
    for node in elem.iter():
        name = _local(node.tag)
        if name == "categories" and node.text:
            for cat in node.text.split():
                if cat not in cats:
                    cats.append(cat)
        elif name == "category":
            term = node.get("term") or (node.text or "").strip()
            if term and term not in cats:
                cats.append(term)
        elif name == "primary_category":
            primary = node.get("term") or (node.text or "").strip() or None
    if primary:
        if primary in cats:
            cats.remove(primary)
        cats.insert(0, primary)
    return cats


_OAI_ID_PREFIX = re.compile(r"^oai:[^:]+:")


def parse_preprint_feed(feed_bytes: bytes) -> ParsedFeed:
    """Parse a harvesting-format XML feed into article records.

    One record element yields one ArticleRecord; whitespace runs in title and
    abstract are collapsed. Records missing mandatory fields or violating the
    article invariants are skipped and counted, never fatal. Malformed XML
    raises FeedParseError with the byte offset of the failure.
    """
    try:
        root = ET.fromstring(feed_bytes)
    except ET.ParseError as exc:
        line, column = exc.position
        lines = feed_bytes.split(b"\n")
        offset = sum(len(l) + 1 for l in lines[: line - 1]) + column
        raise FeedParseError(f"malformed feed XML: {exc}", offset) from exc

    records: list[ArticleRecord] = []
    skipped = 0
    for elem in root.iter():
        if _local(elem.tag) != "record":
            continue
        raw_id = _child_text(elem, "id", "identifier")
        title = _child_text(elem, "title")
        abstract = _child_text(elem, "abstract", "summary")
        raw_date = _child_text(elem, "created", "date", "datestamp")
        categories = _record_categories(elem)
        if not (raw_id and title and abstract and raw_date and categories):
            skipped += 1
            continue
        article_id = _OAI_ID_PREFIX.sub("", raw_id.strip())
        url = _child_text(elem, "url", "link") or f"https://arxiv.org/abs/{article_id}"
        try:
            record = ArticleRecord(
                id=article_id,
                title=collapse_ws(title),
                abstract=collapse_ws(abstract),
                url=url.strip(),
                primary_category=categories[0],
                categories=categories,
                published_date=date.fromisoformat(raw_date.strip()[:10]),
            )
            record.validate()
        except (InvalidRecordError, ValueError):
            skipped += 1
            continue
        records.append(record)
    return ParsedFeed(records=records, skipped=skipped)


def boilerplate_lines(bodies: list[str], min_fraction: float = 0.5) -> set[str]:
    """Lines appearing in at least ``min_fraction`` of the given bodies.

    Lines are compared after stripping surrounding whitespace; blank lines are
    never treated as boilerplate.
    """
    if not bodies:
        return set()
    counts: Counter[str] = Counter()
    for body in bodies:
        seen = {line.strip() for line in body.splitlines()}
        seen.discard("")
        counts.update(seen)
    threshold = min_fraction * len(bodies)
    return {line for line, n in counts.items() if n >= threshold}


def clean_news_text(body: str, boilerplate: set[str]) -> str:
    """Remove exact-match boilerplate lines and collapse blank runs.

    Idempotent: cleaning an already-clean body with the same boilerplate set
    is the identity. Lines not present in ``boilerplate`` are never removed.
    """
    kept: list[str] = []
    for raw in body.splitlines():
        line = raw.strip()
        if line in boilerplate:
            continue
        if line == "" and (not kept or kept[-1] == ""):
            continue  # collapse blank runs, drop leading blanks
        kept.append(line)
    while kept and kept[-1] == "":
        kept.pop()
    return "\n".join(kept)


def partition_by_date(
    store: "CorpusStore", cutoff: date
) -> tuple[list[ArticleRecord], list[ArticleRecord]]:
    """Split the corpus into (before cutoff, cutoff and later) by publication date."""
    before = [a for a in store.iter_articles() if a.published_date < cutoff]
    after = [a for a in store.iter_articles() if a.published_date >= cutoff]
    return before, after


@dataclass
class CorpusStore:
    """In-memory corpus with article and outlet indexes, bound to a data dir."""

    data_dir: Path
    articles: dict[str, ArticleRecord] = field(default_factory=dict)
    outlets: dict[str, OutletProfile] = field(default_factory=dict)
    outlet_items: dict[str, list[OutletNewsItem]] = field(default_factory=dict)
    article_vector_ids: list[str] = field(default_factory=list)
    article_vectors: np.ndarray | None = None

    def iter_articles(self):
        return iter(self.articles.values())

    def add_article(self, record: ArticleRecord) -> None:
        """Insert or replace; the latest-seen record wins for a duplicate id."""
        record.validate()
        self.articles[record.id] = record

    def add_outlet(self, profile: OutletProfile) -> None:
        profile.validate()
        self.outlets[profile.outlet_id] = profile
        self.outlet_items.setdefault(profile.outlet_id, [])

    def add_outlet_items(self, outlet_id: str, items: list[OutletNewsItem]) -> None:
        if outlet_id not in self.outlets:
            raise KeyError(f"unknown outlet {outlet_id!r}; seed the roster first")
        existing = self.outlet_items.setdefault(outlet_id, [])
        seen = {i.item_id for i in existing}
        for item in items:
            item.validate()
            if item.item_id in seen:
                continue
            existing.append(item)
            seen.add(item.item_id)

    def article_vector(self, article_id: str) -> np.ndarray | None:
        if self.article_vectors is None:
            return None
        try:
            row = self.article_vector_ids.index(article_id)
        except ValueError:
            return None
        return self.article_vectors[row]


def _read_ndjson(path: Path):
    """Yield (line_no, parsed object); raise CorpusFormatError on a bad line."""
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(path, line_no, f"invalid JSON: {exc.msg}") from exc


def _write_ndjson(path: Path, objs) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for obj in objs:
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def save_angles(store: CorpusStore) -> None:
    """Rewrite only angles.ndjson; the server's angle-cache write path."""
    articles = sorted(store.articles.values(), key=lambda a: a.id)
    _write_ndjson(
        Path(store.data_dir) / "angles.ndjson",
        (a.angle_cache.to_json_dict() for a in articles if a.angle_cache is not None),
    )


def save_corpus(store: CorpusStore) -> None:
    """Persist every record to the store's data directory.

    ``articles.ndjson`` carries exactly the canonical key set; extracted
    features and cached angle sets go to sidecar files so the article file
    stays schema-stable.
    """
    from cnd import relevance  # vector codec; imported late to avoid a cycle

    data_dir = Path(store.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)

    articles = sorted(store.articles.values(), key=lambda a: a.id)
    _write_ndjson(data_dir / "articles.ndjson", (a.to_json_dict() for a in articles))
    _write_ndjson(
        data_dir / "features.ndjson",
        (
            {"article_id": a.id, **a.features.to_json_dict()}
            for a in articles
            if a.features is not None
        ),
    )
    _write_ndjson(
        data_dir / "angles.ndjson",
        (a.angle_cache.to_json_dict() for a in articles if a.angle_cache is not None),
    )

    roster = [
        {
            "outlet_id": o.outlet_id,
            "name": o.name,
            "url": o.url,
            "outlet_type": o.outlet_type,
        }
        for o in sorted(store.outlets.values(), key=lambda o: o.outlet_id)
    ]
    (data_dir / "outlets.json").write_text(
        json.dumps(roster, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    for outlet_id, items in sorted(store.outlet_items.items()):
        _write_ndjson(
            data_dir / "outlets" / f"{outlet_id}.ndjson",
            (i.to_json_dict() for i in items),
        )
    for outlet in store.outlets.values():
        if outlet.item_vectors is not None:
            relevance.write_vectors(
                data_dir / "vectors" / f"{outlet.outlet_id}.f32",
                outlet.vector_ids,
                outlet.item_vectors,
            )
    if store.article_vectors is not None:
        relevance.write_vectors(
            data_dir / "vectors" / "articles.f32",
            store.article_vector_ids,
            store.article_vectors,
        )


def load_corpus(data_dir: Path | str) -> CorpusStore:
    """Load a corpus saved by save_corpus; inverse on every stored field."""
    from cnd import relevance

    data_dir = Path(data_dir)
    store = CorpusStore(data_dir=data_dir)

    articles_path = data_dir / "articles.ndjson"
    if articles_path.exists():
        for line_no, obj in _read_ndjson(articles_path):
            try:
                record = ArticleRecord.from_json_dict(obj)
            except (InvalidRecordError, KeyError, ValueError) as exc:
                raise CorpusFormatError(articles_path, line_no, str(exc)) from exc
            store.articles[record.id] = record

    features_path = data_dir / "features.ndjson"
    if features_path.exists():
        for line_no, obj in _read_ndjson(features_path):
            article_id = obj.get("article_id")
            if article_id not in store.articles:
                raise CorpusFormatError(
                    features_path, line_no, f"features for unknown article {article_id!r}"
                )
            vector = FeatureVector.from_json_dict(obj)
            store.articles[article_id] = replace(store.articles[article_id], features=vector)

    angles_path = data_dir / "angles.ndjson"
    if angles_path.exists():
        for line_no, obj in _read_ndjson(angles_path):
            try:
                angle_set = AngleSet.from_json_dict(obj)
            except (KeyError, ValueError) as exc:
                raise CorpusFormatError(angles_path, line_no, str(exc)) from exc
            if angle_set.article_id not in store.articles:
                raise CorpusFormatError(
                    angles_path,
                    line_no,
                    f"angles for unknown article {angle_set.article_id!r}",
                )
            store.articles[angle_set.article_id] = replace(
                store.articles[angle_set.article_id], angle_cache=angle_set
            )

    roster_path = data_dir / "outlets.json"
    if roster_path.exists():
        roster = json.loads(roster_path.read_text(encoding="utf-8"))
        for entry in roster:
            profile = OutletProfile(
                outlet_id=entry["outlet_id"],
                name=entry["name"],
                url=entry["url"],
                outlet_type=entry["outlet_type"],
            )
            profile.validate()
            store.outlets[profile.outlet_id] = profile
            store.outlet_items.setdefault(profile.outlet_id, [])

    outlets_dir = data_dir / "outlets"
    if outlets_dir.is_dir():
        for path in sorted(outlets_dir.glob("*.ndjson")):
            outlet_id = path.stem
            items = []
            for line_no, obj in _read_ndjson(path):
                try:
                    items.append(OutletNewsItem.from_json_dict(outlet_id, obj))
                except (InvalidRecordError, KeyError, ValueError) as exc:
                    raise CorpusFormatError(path, line_no, str(exc)) from exc
            store.outlet_items[outlet_id] = items

    vectors_dir = data_dir / "vectors"
    if vectors_dir.is_dir():
        for path in sorted(vectors_dir.glob("*.f32")):
            ids, matrix = relevance.read_vectors(path)
            if path.stem == "articles":
                store.article_vector_ids = ids
                store.article_vectors = matrix
            elif path.stem in store.outlets:
                store.outlets[path.stem].item_vectors = matrix
                store.outlets[path.stem].vector_ids = ids
    return store
