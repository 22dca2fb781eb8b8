"""Walkthrough: text features, news-value aggregation, and the regression forest.

Run with:  python3 demos/02_features_and_forest.py
"""

import tempfile
from datetime import date
from pathlib import Path

import numpy as np

from cnd.corpus import ArticleRecord
from cnd.newsworthiness import (
    NewsValueRatings,
    TrainParams,
    aggregate_news_values,
    fit_forest,
    load_model,
    predict,
    save_model,
)
from cnd.textfeat import JargonTaxonomy, extract_features, feature_names, jargon_profile, tokenize

print("== Tokenization and jargon profile ==")
text = "Transformer-based models beat 3 baselines on protein folding."
tokens = tokenize(text)
print(f"tokens: {tokens}")
taxonomy = JargonTaxonomy(
    {
        "models": "easy",
        "beat": "easy",
        "baselines": "medium",
        "protein": "medium",
        "transformer": "hard",
        "folding": "medium",
        "based": "easy",
        "on": "easy",
    }
)
fe, fm, fh = jargon_profile(tokens, taxonomy)
print(f"easy/medium/hard fractions: {fe:.2f} / {fm:.2f} / {fh:.2f} (unknown words count as hard)")

print("\n== Feature vectors ==")
article = ArticleRecord(
    id="2201.00042",
    title="Protein folding cracked",
    abstract=text,
    url="https://arxiv.org/abs/2201.00042",
    primary_category="cs.LG",
    categories=["cs.LG", "q-bio.BM"],
    published_date=date(2022, 1, 10),
)
categories = ["cs.CL", "cs.LG", "q-bio.BM"]
fv = extract_features(article, taxonomy, categories)
for name, value in zip(feature_names(categories), fv.to_array()):
    print(f"  {name:>22} = {value:.3f}")

print("\n== Aggregating news-value ratings into a 0-100 target ==")
ratings = NewsValueRatings(actuality=80, controversy=60, impact_magnitude=90, impact_valence=70)
print(f"mean of (80, 60, 90, 70) -> {aggregate_news_values(ratings)}")

print("\n== Training and applying the forest ==")
rng = np.random.default_rng(0)
# synthetic rule: longer, easier abstracts score higher
X = rng.uniform(0, 1, size=(200, 3))
y = np.clip(60 * X[:, 0] + 40 * X[:, 1] + rng.normal(0, 4, 200), 0, 100)
labeled = [(X[i].tolist(), float(y[i])) for i in range(len(y))]
params = TrainParams(n_trees=30, max_depth=6, bootstrap_seed=7)
model = fit_forest(labeled, params)
probe = [0.9, 0.8, 0.5]
print(f"trained {len(model.trees)} trees on {len(labeled)} examples")
print(f"predict({probe}) = {predict(model, probe):.2f} (true rule gives {60*0.9 + 40*0.8:.1f})")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "forest.json"
    save_model(model, path)
    restored = load_model(path)
    print(f"model file round-trip: {predict(restored, probe) == predict(model, probe)}")
    print(f"model file size: {path.stat().st_size} bytes, deterministic for a fixed seed")
