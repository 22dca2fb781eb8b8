"""REST API over the pipeline: article queries, on-demand angle generation,
outlet summaries, and the transparency disclosure.

The server reads an immutable corpus snapshot; the only write path is the
angle cache updated by POST /articles/{id}/angles. Provider credentials are
scrubbed from every error body.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from cnd import corpus as corpus_mod
from cnd.angles import (
    DEFAULT_REDUNDANCY_THRESHOLD,
    HttpAngleProvider,
    IncompleteGenerationError,
    StubAngleProvider,
    generate_angles,
)
from cnd.query import (
    DEFAULT_PAGE_SIZE,
    MissingScoreError,
    QuerySpec,
    QueryValidationError,
    filter_articles,
    paginate,
    rank_articles,
)
from cnd.relevance import (
    HttpEmbeddingProvider,
    ProviderError,
    RelevanceResult,
    StubEmbeddingProvider,
    multi_outlet_relevance,
    outlet_relevance,
)

DATA_DIR_ENV = "CND_DATA_DIR"
_SECRET_ENVS = ("CND_LLM_API_KEY", "CND_EMBED_API_KEY")

DISCLOSURE_TOPICS = ("newsworthiness", "outlet_relevance", "news_angles", "data_provenance")


@dataclass(frozen=True)
class DisclosureSection:
    topic: str
    title: str
    body: str
    references: tuple[str, ...] = ()


@dataclass(frozen=True)
class Disclosure:
    """Transparency content shown to end users, one section per subsidy."""

    sections: tuple[DisclosureSection, ...]

    def __post_init__(self):
        topics = {s.topic for s in self.sections}
        missing = [t for t in DISCLOSURE_TOPICS if t not in topics]
        if missing:
            raise ValueError(f"disclosure is missing sections: {missing}")

    def to_json_dict(self) -> dict:
        return {
            "sections": [
                {
                    "topic": s.topic,
                    "title": s.title,
                    "body": s.body,
                    "references": list(s.references),
                }
                for s in self.sections
            ]
        }


DEFAULT_DISCLOSURE = Disclosure(
    sections=(
        DisclosureSection(
            topic="newsworthiness",
            title="How the newsworthiness score works",
            body=(
                "Each article receives a 0-100 newsworthiness score predicted by a "
                "regression-forest model from textual features of the title and "
                "abstract (length, readability and jargon profile, numeric density, "
                "and topical categories). The model is trained on aggregated ratings "
                "of four news values: actuality, controversy, impact magnitude, and "
                "impact valence. The score orients attention; it does not replace "
                "editorial judgment."
            ),
            references=("https://arxiv.org/",),
        ),
        DisclosureSection(
            topic="outlet_relevance",
            title="How the outlet relevance score works",
            body=(
                "For each selected outlet, the article and the outlet's historical "
                "news items are embedded as vectors. The score is the average cosine "
                "similarity between the article and its top decile of most similar "
                "items, i.e. how well the article fits the outlet's closest coverage "
                "niche. With several outlets selected, per-outlet scores are averaged."
            ),
            references=(),
        ),
        DisclosureSection(
            topic="news_angles",
            title="How news angles are generated",
            body=(
                "Three candidate headlines are generated by a large language model "
                "prompted with the article's title and abstract. Generated text can "
                "be inaccurate or repetitive; angles flagged as redundant are marked "
                "in the interface. Always verify against the article before use."
            ),
            references=(),
        ),
        DisclosureSection(
            topic="data_provenance",
            title="Where the data comes from",
            body=(
                "Preprint metadata (title, abstract, categories, dates) is harvested "
                "from a public preprint archive feed. Outlet corpora are collected "
                "from each outlet's publicly available news items and cleaned of "
                "boilerplate before embedding."
            ),
            references=("https://arxiv.org/",),
        ),
    )
)


@dataclass
class ApiConfig:
    """Server configuration; provider endpoints and keys come from env vars."""

    data_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000
    providers: str = "http"  # "http" or "stub"
    stub_dim: int = 256
    stub_seed: int = 0
    ui_dir: Path | None = None

    def validate(self) -> None:
        if not 0 < self.port < 65536:
            raise ValueError(f"invalid port {self.port}")
        if not Path(self.data_dir).is_dir():
            raise ValueError(f"data_dir {self.data_dir} does not exist")


def _scrub(text: str) -> str:
    """Strip configured provider credentials out of outbound error text."""
    for env in _SECRET_ENVS:
        value = os.environ.get(env)
        if value:
            text = text.replace(value, "***")
    return text


class AngleRequest(BaseModel):
    fresh: bool = False
    threshold: float = DEFAULT_REDUNDANCY_THRESHOLD


def _parse_query_params(params) -> QuerySpec:
    """Build a QuerySpec from raw query-string values.

    Collects per-field parse problems (bad dates, bad numbers) alongside the
    QuerySpec invariant violations so a 400 can report everything at once.
    """
    problems: list[tuple[str, str]] = []

    def parse_date(name: str) -> date | None:
        raw = params.get(name)
        if raw in (None, ""):
            return None
        try:
            return date.fromisoformat(raw)
        except ValueError:
            problems.append((name, f"not an ISO-8601 date: {raw!r}"))
            return None

    def parse_float(name: str) -> float | None:
        raw = params.get(name)
        if raw in (None, ""):
            return None
        try:
            return float(raw)
        except ValueError:
            problems.append((name, f"not a number: {raw!r}"))
            return None

    def parse_int(name: str, default: int) -> int:
        raw = params.get(name)
        if raw in (None, ""):
            return default
        try:
            return int(raw)
        except ValueError:
            problems.append((name, f"not an integer: {raw!r}"))
            return default

    outlets_raw = params.get("outlets", "")
    outlet_ids = tuple(o for o in outlets_raw.split(",") if o) if outlets_raw else ()
    spec = QuerySpec(
        date_from=parse_date("date_from"),
        date_to=parse_date("date_to"),
        min_newsworthiness=parse_float("min_news"),
        max_newsworthiness=parse_float("max_news"),
        rank_by=params.get("rank_by", "newsworthiness"),
        outlet_ids=outlet_ids,
        page=parse_int("page", 1),
        page_size=parse_int("page_size", DEFAULT_PAGE_SIZE),
    )
    problems.extend(spec.violations())
    if problems:
        raise QueryValidationError(problems)
    return spec


def _validation_response(exc: QueryValidationError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={
            "errors": [{"field": f, "message": _scrub(m)} for f, m in exc.violations]
        },
    )


def create_app(
    data_dir: Path | str,
    embed_provider=None,
    angle_provider=None,
    disclosure: Disclosure = DEFAULT_DISCLOSURE,
    ui_dir: Path | str | None = None,
) -> FastAPI:
    """Build the API over a corpus snapshot loaded from ``data_dir``.

    Providers default to the remote HTTP services configured via env vars;
    pass stub providers for hermetic operation.
    """
    store = corpus_mod.load_corpus(data_dir)
    app = FastAPI(title="cnd", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.embed_provider = embed_provider
    app.state.angle_provider = angle_provider
    app.state.disclosure = disclosure
    app.state.relevance_memo = {}  # (article_id, outlet_id) -> RelevanceResult
    app.state.angle_locks = {}
    app.state.locks_guard = threading.Lock()
    app.state.store_write_lock = threading.Lock()

    @app.exception_handler(Exception)
    async def unhandled(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": _scrub(str(exc))})

    def relevance_for(article_id: str, outlet_id: str) -> RelevanceResult | None:
        memo = app.state.relevance_memo
        key = (article_id, outlet_id)
        if key in memo:
            return memo[key]
        outlet = store.outlets.get(outlet_id)
        vec = store.article_vector(article_id)
        if outlet is None or outlet.item_vectors is None or len(outlet.item_vectors) == 0:
            result = None
        elif vec is None:
            result = None
        else:
            result = outlet_relevance(vec, outlet, article_id=article_id)
        memo[key] = result
        return result

    def multi_relevance(article_id: str, outlet_ids: tuple[str, ...]) -> float | None:
        results = [relevance_for(article_id, oid) for oid in outlet_ids]
        if any(r is None for r in results):
            return None
        return multi_outlet_relevance(list(results))

    @app.get("/articles")
    def get_articles(request: Request):
        try:
            spec = _parse_query_params(request.query_params)
        except QueryValidationError as exc:
            return _validation_response(exc)

        unknown = [o for o in spec.outlet_ids if o not in store.outlets]
        if unknown:
            return _validation_response(
                QueryValidationError([("outlets", f"unknown outlet ids: {unknown}")])
            )

        matched, skipped_unscored = filter_articles(store, spec)
        relevance_scores: dict[str, float] = {}
        if spec.outlet_ids:
            for article in matched:
                score = multi_relevance(article.id, spec.outlet_ids)
                if score is not None:
                    relevance_scores[article.id] = score
        try:
            ordered = rank_articles(matched, spec, relevance_scores)
        except MissingScoreError as exc:
            return _validation_response(
                QueryValidationError(
                    [("outlets", f"no relevance scores for articles: {exc.article_ids}")]
                )
            )
        page = paginate(ordered, spec.page, spec.page_size, skipped_unscored)

        items = []
        for article, _score in page.items:
            cache = article.angle_cache
            items.append(
                {
                    "id": article.id,
                    "title": article.title,
                    "abstract": article.abstract,
                    "url": article.url,
                    "published_date": article.published_date.isoformat(),
                    "newsworthiness": article.newsworthiness,
                    "outlet_relevance": relevance_scores.get(article.id),
                    "angles": list(cache.angles) if cache else None,
                    "redundant_flags": list(cache.redundant_flags) if cache else None,
                }
            )
        return {
            "items": items,
            "total_matches": page.total_matches,
            "page": page.page,
            "page_size": page.page_size,
            "skipped_unscored": page.skipped_unscored,
        }

    @app.post("/articles/{article_id}/angles")
    def post_angles(article_id: str, body: AngleRequest | None = None):
        body = body or AngleRequest()
        article = store.articles.get(article_id)
        if article is None:
            return JSONResponse(
                status_code=404, content={"error": f"unknown article {article_id!r}"}
            )
        with app.state.locks_guard:
            lock = app.state.angle_locks.setdefault(article_id, threading.Lock())
        if not lock.acquire(blocking=False):
            return JSONResponse(
                status_code=409,
                content={"error": f"angle generation already in flight for {article_id!r}"},
            )
        try:
            angle_set = generate_angles(
                article,
                app.state.angle_provider,
                app.state.embed_provider,
                threshold=body.threshold,
                fresh=body.fresh,
            )
            with app.state.store_write_lock:
                corpus_mod.save_angles(store)
        except (ProviderError, IncompleteGenerationError) as exc:
            return JSONResponse(status_code=502, content={"error": _scrub(str(exc))})
        except (ValueError,) as exc:
            return JSONResponse(status_code=400, content={"error": _scrub(str(exc))})
        finally:
            lock.release()
        return angle_set.to_json_dict()

    @app.get("/outlets")
    def get_outlets():
        out = []
        for outlet_id in sorted(store.outlets):
            outlet = store.outlets[outlet_id]
            vectors = outlet.item_vectors
            out.append(
                {
                    "outlet_id": outlet.outlet_id,
                    "name": outlet.name,
                    "url": outlet.url,
                    "outlet_type": outlet.outlet_type,
                    "item_count": len(store.outlet_items.get(outlet_id, [])),
                    "embedded": vectors is not None and len(vectors) > 0,
                    "vector_count": 0 if vectors is None else int(len(vectors)),
                }
            )
        return out

    @app.get("/about")
    def get_about():
        return app.state.disclosure.to_json_dict()

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def build_providers(config: ApiConfig):
    """Instantiate the embedding and completion providers for serve."""
    if config.providers == "stub":
        return (
            StubEmbeddingProvider(dim=config.stub_dim, seed=config.stub_seed),
            StubAngleProvider(),
        )
    return HttpEmbeddingProvider(), HttpAngleProvider()


def serve(config: ApiConfig) -> None:
    """Run the API under uvicorn (blocking)."""
    import uvicorn

    config.validate()
    embed_provider, angle_provider = build_providers(config)
    app = create_app(
        config.data_dir,
        embed_provider=embed_provider,
        angle_provider=angle_provider,
        ui_dir=config.ui_dir,
    )
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
