"""Filtering, ranking, and pagination of scored articles.

All predicates are inclusive; ranking is a deterministic total order
(score descending, then later publication date, then id), so pagination
is stable under re-query.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from cnd.corpus import ArticleRecord, CorpusStore

RANK_BY_CHOICES = ("newsworthiness", "outlet_relevance")

MAX_PAGE_SIZE = 200
DEFAULT_PAGE_SIZE = 20


class QueryValidationError(ValueError):
    """Invalid QuerySpec; carries (field, message) pairs for every violation."""

    def __init__(self, violations: list[tuple[str, str]]):
        super().__init__("; ".join(f"{f}: {m}" for f, m in violations))
        self.violations = violations


class MissingScoreError(ValueError):
    """Ranking was asked for articles lacking the required score."""

    def __init__(self, article_ids: list[str]):
        super().__init__(f"no relevance score for articles: {', '.join(article_ids)}")
        self.article_ids = article_ids


@dataclass(frozen=True)
class QuerySpec:
    """A journalist's filter/rank/pagination request."""

    date_from: date | None = None
    date_to: date | None = None
    min_newsworthiness: float | None = None
    max_newsworthiness: float | None = None
    rank_by: str = "newsworthiness"
    outlet_ids: tuple[str, ...] = ()
    page: int = 1
    page_size: int = DEFAULT_PAGE_SIZE

    def violations(self) -> list[tuple[str, str]]:
        found: list[tuple[str, str]] = []
        if self.rank_by not in RANK_BY_CHOICES:
            found.append(("rank_by", f"must be one of {RANK_BY_CHOICES}"))
        if self.rank_by == "outlet_relevance" and not self.outlet_ids:
            found.append(("outlets", "rank_by=outlet_relevance requires at least one outlet"))
        if self.date_from and self.date_to and self.date_from > self.date_to:
            found.append(("date_from", "date_from is after date_to"))
        for name in ("min_newsworthiness", "max_newsworthiness"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 100.0:
                found.append((name, f"{value} outside [0, 100]"))
        if (
            self.min_newsworthiness is not None
            and self.max_newsworthiness is not None
            and self.min_newsworthiness > self.max_newsworthiness
        ):
            found.append(("min_newsworthiness", "min is above max"))
        if self.page < 1:
            found.append(("page", "page must be >= 1"))
        if not 1 <= self.page_size <= MAX_PAGE_SIZE:
            found.append(("page_size", f"page_size must be in [1, {MAX_PAGE_SIZE}]"))
        return found

    def validated(self) -> "QuerySpec":
        found = self.violations()
        if found:
            raise QueryValidationError(found)
        return self


def filter_articles(
    store: "CorpusStore", spec: QuerySpec
) -> tuple[list["ArticleRecord"], int]:
    """Articles satisfying every present predicate, plus the unscored count.

    Articles without a newsworthiness score cannot be ranked; they are
    excluded and counted rather than silently ranked at zero.
    """
    spec.validated()
    matched: list["ArticleRecord"] = []
    skipped_unscored = 0
    for article in sorted(store.iter_articles(), key=lambda a: a.id):
        if article.newsworthiness is None:
            skipped_unscored += 1
            continue
        if spec.date_from and article.published_date < spec.date_from:
            continue
        if spec.date_to and article.published_date > spec.date_to:
            continue
        if (
            spec.min_newsworthiness is not None
            and article.newsworthiness < spec.min_newsworthiness
        ):
            continue
        if (
            spec.max_newsworthiness is not None
            and article.newsworthiness > spec.max_newsworthiness
        ):
            continue
        matched.append(article)
    return matched, skipped_unscored


def rank_articles(
    articles: list["ArticleRecord"],
    spec: QuerySpec,
    relevance_scores: dict[str, float] | None = None,
) -> list[tuple["ArticleRecord", float]]:
    """Order articles by the chosen score into a deterministic total order.

    Ties break toward the later published_date, then lexicographic id, so
    permuting the input can never change the output sequence.
    """
    spec.validated()
    if spec.rank_by == "outlet_relevance":
        scores = relevance_scores or {}
        missing = sorted(a.id for a in articles if a.id not in scores)
        if missing:
            raise MissingScoreError(missing)
        keyed = [(a, float(scores[a.id])) for a in articles]
    else:
        keyed = [(a, float(a.newsworthiness)) for a in articles]
    keyed.sort(key=lambda pair: (-pair[1], -pair[0].published_date.toordinal(), pair[0].id))
    return keyed


@dataclass(frozen=True)
class Page:
    """One page of ranked (article, displayed_score) items."""

    items: tuple
    total_matches: int
    page: int
    page_size: int
    skipped_unscored: int = 0


def paginate(
    ordered: list[tuple["ArticleRecord", float]],
    page: int,
    page_size: int,
    skipped_unscored: int = 0,
) -> Page:
    """Slice the ranked list into page ``page`` (1-based).

    A past-the-end page yields empty items with the correct total, so clients
    can page freely without extra bounds checks.
    """
    if page < 1:
        raise ValueError(f"page must be >= 1, got {page}")
    if page_size < 1:
        raise ValueError(f"page_size must be >= 1, got {page_size}")
    start = (page - 1) * page_size
    return Page(
        items=tuple(ordered[start : start + page_size]),
        total_matches=len(ordered),
        page=page,
        page_size=page_size,
        skipped_unscored=skipped_unscored,
    )
