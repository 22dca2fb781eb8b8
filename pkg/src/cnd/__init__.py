"""Computational news discovery for science journalism.

Ingests preprint metadata, scores newsworthiness with a portable regression
forest, computes per-outlet relevance from embedding similarity, generates
candidate news angles through a pluggable completion provider, and serves
ranked results to journalists over a REST API and CLI.
"""

__version__ = "0.1.0"

from cnd.angles import AngleSet, GenerationParams, build_prompt, generate_angles, parse_angles
from cnd.corpus import (
    ArticleRecord,
    CorpusStore,
    OutletNewsItem,
    OutletProfile,
    clean_news_text,
    load_corpus,
    parse_preprint_feed,
    partition_by_date,
    save_corpus,
)
from cnd.evalmetrics import icc_consistency, overall_quality, precision_at_k, spearman
from cnd.newsworthiness import (
    ForestModel,
    NewsValueRatings,
    TrainParams,
    TreeNode,
    aggregate_news_values,
    fit_forest,
    predict,
)
from cnd.query import Page, QuerySpec, filter_articles, paginate, rank_articles
from cnd.relevance import (
    RelevanceResult,
    cosine,
    multi_outlet_relevance,
    outlet_relevance,
    stub_embed,
)
from cnd.textfeat import FeatureVector, JargonTaxonomy, extract_features, jargon_profile, tokenize

__all__ = [
    "AngleSet",
    "ArticleRecord",
    "CorpusStore",
    "FeatureVector",
    "ForestModel",
    "GenerationParams",
    "JargonTaxonomy",
    "NewsValueRatings",
    "OutletNewsItem",
    "OutletProfile",
    "Page",
    "QuerySpec",
    "RelevanceResult",
    "TrainParams",
    "TreeNode",
    "aggregate_news_values",
    "build_prompt",
    "clean_news_text",
    "cosine",
    "extract_features",
    "filter_articles",
    "fit_forest",
    "generate_angles",
    "icc_consistency",
    "jargon_profile",
    "load_corpus",
    "multi_outlet_relevance",
    "outlet_relevance",
    "overall_quality",
    "paginate",
    "parse_angles",
    "parse_preprint_feed",
    "partition_by_date",
    "precision_at_k",
    "predict",
    "rank_articles",
    "save_corpus",
    "spearman",
    "stub_embed",
    "tokenize",
]
