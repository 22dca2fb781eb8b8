"""Operator CLI: ingestion, feature extraction, training, scoring, embedding,
angle generation, evaluation metrics, and the API server.

Commands mutate one data directory (``--data-dir``, or ``CND_DATA_DIR``,
default ``./data``); the server reads the resulting snapshot.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import date
from pathlib import Path

from cnd import corpus as corpus_mod
from cnd import evalmetrics, newsworthiness, relevance, roster, textfeat
from cnd.angles import GenerationParams, StubAngleProvider, generate_angles
from cnd.server import ApiConfig, serve


def _data_dir(args) -> Path:
    return Path(args.data_dir or os.environ.get("CND_DATA_DIR") or "data")


def _load_store(args) -> corpus_mod.CorpusStore:
    return corpus_mod.load_corpus(_data_dir(args))


def _embed_provider(args):
    if args.provider == "stub":
        return relevance.StubEmbeddingProvider(dim=args.dim, seed=args.seed)
    return relevance.HttpEmbeddingProvider()


def cmd_init(args) -> int:
    store = _load_store(args)
    added = roster.seed_roster(store)
    corpus_mod.save_corpus(store)
    print(f"initialized {_data_dir(args)} with {added} new outlets "
          f"({len(store.outlets)} total)")
    return 0


def cmd_ingest_arxiv(args) -> int:
    feed_bytes = Path(args.input).read_bytes()
    parsed = corpus_mod.parse_preprint_feed(feed_bytes)
    store = _load_store(args)
    for record in parsed.records:
        store.add_article(record)
    corpus_mod.save_corpus(store)
    print(
        f"ingested {len(parsed.records)} articles ({parsed.skipped} skipped); "
        f"corpus now {len(store.articles)}"
    )
    return 0


def cmd_ingest_outlet(args) -> int:
    store = _load_store(args)
    if args.outlet not in store.outlets:
        print(
            f"unknown outlet {args.outlet!r}; run `cnd init` or add it to outlets.json",
            file=sys.stderr,
        )
        return 1
    raw_items = []
    for line_no, line in enumerate(Path(args.input).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            raw_items.append(corpus_mod.OutletNewsItem.from_json_dict(args.outlet, json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            print(f"{args.input}:{line_no}: bad item: {exc}", file=sys.stderr)
            return 1
    boilerplate = corpus_mod.boilerplate_lines(
        [i.body for i in raw_items], min_fraction=args.boilerplate_threshold
    )
    cleaned = []
    dropped_empty = 0
    for item in raw_items:
        body = corpus_mod.clean_news_text(item.body, boilerplate)
        if not body:
            dropped_empty += 1
            continue
        cleaned.append(
            corpus_mod.OutletNewsItem(
                outlet_id=item.outlet_id,
                item_id=item.item_id,
                title=item.title,
                body=body,
                published_date=item.published_date,
            )
        )
    store.add_outlet_items(args.outlet, cleaned)
    corpus_mod.save_corpus(store)
    print(
        f"ingested {len(cleaned)} items for {args.outlet} "
        f"({len(boilerplate)} boilerplate lines removed, {dropped_empty} emptied); "
        f"outlet now {len(store.outlet_items[args.outlet])}"
    )
    return 0


def cmd_partition(args) -> int:
    store = _load_store(args)
    cutoff = date.fromisoformat(args.cutoff)
    before, after = corpus_mod.partition_by_date(store, cutoff)
    print(f"{len(before)} articles before {cutoff}, {len(after)} on/after")
    return 0


def cmd_features(args) -> int:
    store = _load_store(args)
    taxonomy = textfeat.load_taxonomy(args.taxonomy)
    if args.categories:
        category_list = [c for c in args.categories.split(",") if c]
    else:
        category_list = sorted({a.primary_category for a in store.iter_articles()})
    done = 0
    failed = 0
    for article in store.iter_articles():
        try:
            article.features = textfeat.extract_features(article, taxonomy, category_list)
            done += 1
        except ValueError:
            failed += 1
    (_data_dir(args) / "feature_config.json").write_text(
        json.dumps(
            {"schema_version": textfeat.FEATURE_SCHEMA_VERSION, "categories": category_list},
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    corpus_mod.save_corpus(store)
    print(f"extracted features for {done} articles ({failed} failed); "
          f"{len(category_list)} category flags")
    return 0


def _label_from_json(obj: dict) -> float:
    if "score" in obj:
        return float(obj["score"])
    ratings = newsworthiness.NewsValueRatings(
        actuality=float(obj["actuality"]),
        controversy=float(obj["controversy"]),
        impact_magnitude=float(obj["impact_magnitude"]),
        impact_valence=float(obj["impact_valence"]),
    )
    return newsworthiness.aggregate_news_values(ratings)


def cmd_train(args) -> int:
    store = _load_store(args)
    labeled = []
    for line_no, line in enumerate(Path(args.labels).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        obj = json.loads(line)
        article = store.articles.get(obj.get("article_id", ""))
        if article is None:
            print(f"{args.labels}:{line_no}: unknown article id", file=sys.stderr)
            return 1
        if article.features is None:
            print(
                f"{args.labels}:{line_no}: article {article.id} has no features; "
                f"run `cnd features` first",
                file=sys.stderr,
            )
            return 1
        labeled.append((article.features, _label_from_json(obj)))
    params = newsworthiness.TrainParams(
        n_trees=args.trees,
        max_depth=args.max_depth,
        min_leaf=args.min_leaf,
        bootstrap_seed=args.seed,
        features_per_split=args.features_per_split,
        bootstrap=not args.no_bootstrap,
    )
    model = newsworthiness.fit_forest(labeled, params)
    model_path = Path(args.model) if args.model else _data_dir(args) / "forest.json"
    newsworthiness.save_model(model, model_path)
    print(f"trained {params.n_trees} trees on {len(labeled)} examples -> {model_path}")
    return 0


def cmd_score(args) -> int:
    store = _load_store(args)
    model_path = Path(args.model) if args.model else _data_dir(args) / "forest.json"
    model = newsworthiness.load_model(model_path)
    scored = 0
    skipped = 0
    for article in store.iter_articles():
        if article.features is None:
            skipped += 1
            continue
        article.newsworthiness = newsworthiness.predict(model, article.features)
        scored += 1
    corpus_mod.save_corpus(store)
    print(f"scored {scored} articles ({skipped} without features)")
    return 0


def _truncate(text: str, budget: int) -> str:
    return text if len(text) <= budget else text[:budget]


def cmd_embed(args) -> int:
    store = _load_store(args)
    provider = _embed_provider(args)
    budget = args.char_budget
    for outlet_id in sorted(store.outlet_items):
        items = store.outlet_items[outlet_id]
        if not items:
            continue
        texts = [_truncate(f"{i.title} {i.body}".strip(), budget) for i in items]
        matrix = relevance.embed_matrix(provider, texts)
        outlet = store.outlets[outlet_id]
        outlet.item_vectors = matrix
        outlet.vector_ids = [i.item_id for i in items]
    articles = sorted(store.iter_articles(), key=lambda a: a.id)
    if articles:
        texts = [_truncate(f"{a.title} {a.abstract}".strip(), budget) for a in articles]
        store.article_vectors = relevance.embed_matrix(provider, texts)
        store.article_vector_ids = [a.id for a in articles]
    corpus_mod.save_corpus(store)
    n_outlets = sum(1 for o in store.outlets.values() if o.item_vectors is not None)
    print(f"embedded {len(articles)} articles and {n_outlets} outlet corpora "
          f"(provider={args.provider}, dim={getattr(provider, 'dim', '?')})")
    return 0


def cmd_angles(args) -> int:
    store = _load_store(args)
    if args.provider == "stub":
        angle_provider = StubAngleProvider()
    else:
        from cnd.angles import HttpAngleProvider

        angle_provider = HttpAngleProvider()
    embed_provider = _embed_provider(args)
    if args.all:
        targets = sorted(store.iter_articles(), key=lambda a: a.id)
    else:
        if not args.article:
            print("pass --article <id> or --all", file=sys.stderr)
            return 1
        if args.article not in store.articles:
            print(f"unknown article {args.article!r}", file=sys.stderr)
            return 1
        targets = [store.articles[args.article]]
    for article in targets:
        angle_set = generate_angles(
            article,
            angle_provider,
            embed_provider,
            params=GenerationParams(),
            threshold=args.threshold,
            fresh=args.fresh,
        )
        if not args.all:
            for angle, flag in zip(angle_set.angles, angle_set.redundant_flags):
                marker = " [redundant]" if flag else ""
                print(f"- {angle}{marker}")
    corpus_mod.save_angles(store)
    if args.all:
        print(f"generated angles for {len(targets)} articles")
    return 0


def cmd_eval_icc(args) -> int:
    ratings = evalmetrics.load_ratings(args.ratings)
    matrix = evalmetrics.ratings_to_matrix(ratings)
    value = evalmetrics.icc_consistency(matrix)
    print(f"ICC(3,1) consistency = {value:.3f} "
          f"({len(matrix.target_ids)} targets x {len(matrix.rater_ids)} raters)")
    return 0


def cmd_eval_pk(args) -> int:
    ranked = [l.strip() for l in Path(args.ranked).read_text(encoding="utf-8").splitlines() if l.strip()]
    relevant = {
        l.strip()
        for l in Path(args.relevant).read_text(encoding="utf-8").splitlines()
        if l.strip()
    }
    value = evalmetrics.precision_at_k(ranked, relevant, args.k)
    print(f"P@{args.k} = {value:.3f}")
    return 0


def cmd_serve(args) -> int:
    config = ApiConfig(
        data_dir=_data_dir(args),
        host=args.host,
        port=args.port,
        providers=args.providers,
        stub_dim=args.dim,
        stub_seed=args.seed,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    serve(config)
    return 0


def _add_data_dir(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data-dir", default=None, help="corpus directory (default: $CND_DATA_DIR or ./data)")


def _add_embed_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--provider", choices=("stub", "http"), default="stub")
    parser.add_argument("--dim", type=int, default=256, help="stub embedding dimension")
    parser.add_argument("--seed", type=int, default=0, help="stub embedding seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnd", description="computational news discovery pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create a data dir and seed the default outlet roster")
    _add_data_dir(p)
    p.set_defaults(func=cmd_init)

    ingest = sub.add_parser("ingest", help="ingest preprint feeds or outlet items")
    ingest_sub = ingest.add_subparsers(dest="source", required=True)

    p = ingest_sub.add_parser("arxiv", help="ingest a preprint harvest feed (XML)")
    p.add_argument("--input", required=True)
    _add_data_dir(p)
    p.set_defaults(func=cmd_ingest_arxiv)

    p = ingest_sub.add_parser("outlet", help="ingest one outlet's news items (NDJSON)")
    p.add_argument("--outlet", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--boilerplate-threshold", type=float, default=0.5)
    _add_data_dir(p)
    p.set_defaults(func=cmd_ingest_outlet)

    p = sub.add_parser("partition", help="count articles before/after a cutoff date")
    p.add_argument("--cutoff", required=True, help="ISO date, e.g. 2022-01-01")
    _add_data_dir(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("features", help="extract feature vectors for every article")
    p.add_argument("--taxonomy", required=True, help="taxonomy.tsv path")
    p.add_argument("--categories", default=None, help="comma-separated category flag list")
    _add_data_dir(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="fit the newsworthiness forest from labels")
    p.add_argument("--labels", required=True, help="labels.ndjson path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--features-per-split", type=int, default=None)
    p.add_argument("--no-bootstrap", action="store_true")
    p.add_argument("--model", default=None, help="output path (default: <data>/forest.json)")
    _add_data_dir(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="predict newsworthiness for every article")
    p.add_argument("--model", default=None, help="forest.json path (default: <data>/forest.json)")
    _add_data_dir(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("embed", help="embed outlet corpora and articles")
    _add_embed_flags(p)
    p.add_argument("--char-budget", type=int, default=relevance.DEFAULT_CHAR_BUDGET)
    _add_data_dir(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("angles", help="generate news angles")
    p.add_argument("--article", default=None)
    p.add_argument("--all", action="store_true", help="generate for every article")
    p.add_argument("--fresh", action="store_true", help="bypass the cache")
    p.add_argument("--threshold", type=float, default=0.9)
    _add_embed_flags(p)
    _add_data_dir(p)
    p.set_defaults(func=cmd_angles)

    eval_p = sub.add_parser("eval", help="evaluation metrics")
    eval_sub = eval_p.add_subparsers(dest="metric", required=True)

    p = eval_sub.add_parser("icc", help="inter-rater ICC over a ratings file")
    p.add_argument("--ratings", required=True)
    p.set_defaults(func=cmd_eval_icc)

    p = eval_sub.add_parser("pk", help="precision@K of a ranking against a relevant set")
    p.add_argument("--ranked", required=True, help="file with one id per line, best first")
    p.add_argument("--relevant", required=True, help="file with one relevant id per line")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_eval_pk)

    p = sub.add_parser("serve", help="run the REST API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--providers", choices=("http", "stub"), default="http")
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ui-dir", default=None, help="static UI assets to mount at /ui")
    _add_data_dir(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (corpus_mod.FeedParseError, corpus_mod.CorpusFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
