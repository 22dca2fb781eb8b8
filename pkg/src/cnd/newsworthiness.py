"""Newsworthiness scoring: news-value aggregation and a portable regression forest.

Models serialize to a versioned JSON file (``forest.json``) so training can
run offline and scoring can load the result anywhere. Serialization is
canonical (sorted keys, fixed separators), so identical models produce
byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from cnd.textfeat import FEATURE_SCHEMA_VERSION, FeatureVector

NEWS_VALUES = ("actuality", "controversy", "impact_magnitude", "impact_valence")


@dataclass(frozen=True)
class NewsValueRatings:
    """Quantitative ratings of the four news values, each on a 0-100 scale."""

    actuality: float
    controversy: float
    impact_magnitude: float
    impact_valence: float

    def __post_init__(self):
        for name in NEWS_VALUES:
            value = getattr(self, name)
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"news value {name!r} = {value} outside [0, 100]")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return tuple(getattr(self, name) for name in NEWS_VALUES)


def aggregate_news_values(
    ratings: NewsValueRatings, weights: Sequence[float] | None = None
) -> float:
    """Overall 0-100 newsworthiness target for one article.

    Defaults to the unweighted arithmetic mean of the four news values;
    ``weights`` (four nonnegative values, not all zero) selects an
    alternative weighted aggregation.
    """
    values = ratings.as_tuple()
    if weights is None:
        return sum(values) / 4.0
    if len(weights) != 4:
        raise ValueError(f"expected 4 weights, got {len(weights)}")
    total = sum(weights)
    if total <= 0:
        raise ValueError("weights must sum to a positive value")
    return sum(v * w for v, w in zip(values, weights)) / total


@dataclass(frozen=True)
class TreeNode:
    """Regression-tree node: a split over one feature, or a leaf value.

    A node is a leaf iff ``value`` is not None; descent goes left iff
    ``feature <= threshold``.
    """

    value: float | None = None
    feature_index: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.value is not None

    @classmethod
    def leaf(cls, value: float) -> "TreeNode":
        return cls(value=float(value))

    @classmethod
    def split(
        cls, feature_index: int, threshold: float, left: "TreeNode", right: "TreeNode"
    ) -> "TreeNode":
        return cls(
            feature_index=int(feature_index),
            threshold=float(threshold),
            left=left,
            right=right,
        )

    def to_json_dict(self) -> dict:
        if self.is_leaf:
            return {"v": self.value}
        return {
            "f": self.feature_index,
            "t": self.threshold,
            "l": self.left.to_json_dict(),
            "r": self.right.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "TreeNode":
        if "v" in obj:
            return cls.leaf(obj["v"])
        return cls.split(
            obj["f"],
            obj["t"],
            cls.from_json_dict(obj["l"]),
            cls.from_json_dict(obj["r"]),
        )


def _validate_tree(node: TreeNode, n_features: int) -> None:
    if node.is_leaf:
        if not 0.0 <= node.value <= 100.0:
            raise ValueError(f"leaf value {node.value} outside [0, 100]")
        return
    if not 0 <= node.feature_index < n_features:
        raise ValueError(
            f"split references feature {node.feature_index}, model has {n_features}"
        )
    _validate_tree(node.left, n_features)
    _validate_tree(node.right, n_features)


@dataclass(frozen=True)
class ForestModel:
    """Bagged regression trees plus the feature schema they were trained on."""

    trees: tuple[TreeNode, ...]
    feature_schema_version: str
    n_features: int

    def __post_init__(self):
        if not self.trees:
            raise ValueError("forest has no trees")
        for tree in self.trees:
            _validate_tree(tree, self.n_features)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.feature_schema_version,
            "n_features": self.n_features,
            "trees": [t.to_json_dict() for t in self.trees],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ForestModel":
        return cls(
            trees=tuple(TreeNode.from_json_dict(t) for t in obj["trees"]),
            feature_schema_version=obj["schema_version"],
            n_features=int(obj["n_features"]),
        )


def model_to_json(model: ForestModel) -> str:
    """Canonical single-line JSON; equal models serialize byte-identically."""
    return json.dumps(model.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def save_model(model: ForestModel, path: Path | str) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: Path | str) -> ForestModel:
    return ForestModel.from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _as_feature_array(features, model: ForestModel) -> np.ndarray:
    if isinstance(features, FeatureVector):
        if features.schema_version != model.feature_schema_version:
            raise ValueError(
                f"feature schema {features.schema_version!r} does not match model "
                f"schema {model.feature_schema_version!r}"
            )
        x = features.to_array()
    else:
        x = np.asarray(features, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ValueError(f"feature arity {x.shape} does not match model ({model.n_features},)")
    return x


def _walk(node: TreeNode, x: np.ndarray) -> float:
    while not node.is_leaf:
        node = node.left if x[node.feature_index] <= node.threshold else node.right
    return node.value


def predict(model: ForestModel, features) -> float:
    """Mean of per-tree leaf values for one feature vector, clamped to [0, 100]."""
    x = _as_feature_array(features, model)
    total = 0.0
    for tree in model.trees:
        total += _walk(tree, x)
    return float(min(100.0, max(0.0, total / len(model.trees))))


@dataclass(frozen=True)
class TrainParams:
    """Hyperparameters for fit_forest; all defaults are desk-scale friendly."""

    n_trees: int = 100
    max_depth: int = 8
    min_leaf: int = 1
    bootstrap_seed: int = 0
    features_per_split: int | None = None  # None = consider every feature
    bootstrap: bool = True


def _grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    idx: np.ndarray,
    depth: int,
    rng: np.random.Generator,
    params: TrainParams,
) -> TreeNode:
    labels = y[idx]
    if (
        depth >= params.max_depth
        or len(idx) < 2 * params.min_leaf
        or float(labels.min()) == float(labels.max())
    ):
        return TreeNode.leaf(float(labels.mean()))

    n_features = X.shape[1]
    mtry = params.features_per_split
    if mtry is not None and mtry < n_features:
        candidates = sorted(rng.choice(n_features, size=mtry, replace=False).tolist())
    else:
        candidates = range(n_features)

    best_sse = np.inf
    best = None  # (feature, threshold, left_rows, right_rows)
    for f in candidates:
        col = X[idx, f]
        order = np.argsort(col, kind="stable")
        sorted_idx = idx[order]
        sorted_col = col[order]
        sorted_y = y[sorted_idx]
        cs = np.cumsum(sorted_y)
        cs2 = np.cumsum(sorted_y**2)
        total_s, total_s2, n = cs[-1], cs2[-1], len(idx)
        # Candidate cuts sit between distinct consecutive values; iterating
        # features ascending and cuts ascending makes the strict '<' below
        # implement the (lowest feature, lowest threshold) tie-break.
        for p in range(params.min_leaf - 1, n - params.min_leaf):
            if sorted_col[p] == sorted_col[p + 1]:
                continue
            m = p + 1
            sse_left = cs2[p] - cs[p] ** 2 / m
            sse_right = (total_s2 - cs2[p]) - (total_s - cs[p]) ** 2 / (n - m)
            sse = sse_left + sse_right
            if sse < best_sse:
                best_sse = sse
                threshold = (sorted_col[p] + sorted_col[p + 1]) / 2.0
                best = (f, threshold, sorted_idx[:m], sorted_idx[m:])

    if best is None:
        return TreeNode.leaf(float(labels.mean()))
    f, threshold, left_rows, right_rows = best
    return TreeNode.split(
        f,
        threshold,
        _grow_tree(X, y, left_rows, depth + 1, rng, params),
        _grow_tree(X, y, right_rows, depth + 1, rng, params),
    )


def fit_forest(
    labeled: list[tuple[FeatureVector, float]] | list[tuple[Sequence[float], float]],
    params: TrainParams = TrainParams(),
) -> ForestModel:
    """Fit bagged CART regression trees on (features, score) pairs.

    Each tree sees a seeded bootstrap resample (or the full sample when
    ``params.bootstrap`` is off) and greedily minimizes the sum of squared
    errors; leaves predict the mean label. Reproducible: the per-tree
    generator is derived from (bootstrap_seed, tree_index), so the result is
    independent of any per-tree scheduling.
    """
    if len(labeled) < 2:
        raise ValueError(f"need at least 2 labeled examples, got {len(labeled)}")

    schema_version = FEATURE_SCHEMA_VERSION
    rows = []
    targets = []
    for features, label in labeled:
        if not 0.0 <= label <= 100.0:
            raise ValueError(f"label {label} outside [0, 100]")
        if isinstance(features, FeatureVector):
            schema_version = features.schema_version
            rows.append(features.to_array())
        else:
            rows.append(np.asarray(features, dtype=np.float64))
        targets.append(float(label))
    X = np.vstack(rows)
    y = np.array(targets, dtype=np.float64)
    n = len(y)

    trees = []
    for i in range(params.n_trees):
        rng = np.random.default_rng([params.bootstrap_seed, i])
        idx = rng.integers(0, n, size=n) if params.bootstrap else np.arange(n)
        trees.append(_grow_tree(X, y, idx, 0, rng, params))
    return ForestModel(
        trees=tuple(trees),
        feature_schema_version=schema_version,
        n_features=X.shape[1],
    )
