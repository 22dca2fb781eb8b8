"""Validation statistics: precision@K, Spearman rank correlation, Likert
aggregation, and intraclass correlation for inter-rater reliability.

The ICC variant is fixed to the two-way mixed-effects, consistency,
single-rater form ICC(3,1); raters are treated as fixed, so per-rater
constant offsets do not lower the coefficient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

LIKERT_CRITERIA = ("fluency", "accuracy", "angle_quality")


def precision_at_k(ranked: list[str], relevant: set[str], k: int) -> float:
    """Fraction of the top-k ranked ids that are in the relevant set."""
    if len(set(ranked)) != len(ranked):
        raise ValueError("ranked list contains duplicate ids")
    if not 1 <= k <= len(ranked):
        raise ValueError(f"k={k} outside [1, {len(ranked)}]")
    hits = sum(1 for item in ranked[:k] if item in relevant)
    return hits / k


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with tied values sharing the mean of their positions."""
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    n = len(values)
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        ranks[order[i : j + 1]] = mean_rank
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation: Pearson correlation of average-assigned ranks."""
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError(f"length mismatch: {xs.shape} vs {ys.shape}")
    if len(xs) < 3:
        raise ValueError(f"need at least 3 paired values, got {len(xs)}")
    rx = _average_ranks(xs)
    ry = _average_ranks(ys)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    var_x = float(dx @ dx)
    var_y = float(dy @ dy)
    if var_x == 0.0 or var_y == 0.0:
        raise ValueError("zero rank variance; correlation undefined")
    return float(np.clip(dx @ dy / np.sqrt(var_x * var_y), -1.0, 1.0))


@dataclass(frozen=True)
class LikertRating:
    """One rater's 1-5 scores for a generated angle set."""

    rater_id: str
    target_id: str
    fluency: int
    accuracy: int
    angle_quality: int

    def __post_init__(self):
        for name in LIKERT_CRITERIA:
            value = getattr(self, name)
            if value not in (1, 2, 3, 4, 5):
                raise ValueError(f"{name} rating {value!r} outside the 1-5 scale")


def overall_quality(rating: LikertRating) -> float:
    """Mean of the fluency, accuracy, and angle-quality criteria."""
    return (rating.fluency + rating.accuracy + rating.angle_quality) / 3.0


@dataclass(frozen=True)
class RatingMatrix:
    """Complete targets x raters grid of real-valued scores."""

    target_ids: tuple[str, ...]
    rater_ids: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]  # row per target, column per rater

    def __post_init__(self):
        if len(self.target_ids) < 2 or len(self.rater_ids) < 2:
            raise ValueError(
                f"need >= 2 targets and >= 2 raters, got "
                f"{len(self.target_ids)} x {len(self.rater_ids)}"
            )
        for row in self.values:
            if len(row) != len(self.rater_ids):
                raise ValueError("rating matrix is not rectangular")
        if len(self.values) != len(self.target_ids):
            raise ValueError("rating matrix rows do not match targets")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


def ratings_to_matrix(ratings: list[LikertRating]) -> RatingMatrix:
    """Arrange per-rating overall quality into a complete targets x raters grid.

    Targets and raters are ordered by first appearance; every (target, rater)
    cell must be present exactly once.
    """
    targets: list[str] = []
    raters: list[str] = []
    cells: dict[tuple[str, str], float] = {}
    for r in ratings:
        if r.target_id not in targets:
            targets.append(r.target_id)
        if r.rater_id not in raters:
            raters.append(r.rater_id)
        key = (r.target_id, r.rater_id)
        if key in cells:
            raise ValueError(f"duplicate rating for target {key[0]!r} by rater {key[1]!r}")
        cells[key] = overall_quality(r)
    missing = [
        (t, r) for t in targets for r in raters if (t, r) not in cells
    ]
    if missing:
        raise ValueError(f"incomplete rating grid; missing cells: {missing[:5]}")
    values = tuple(
        tuple(cells[(t, r)] for r in raters) for t in targets
    )
    return RatingMatrix(tuple(targets), tuple(raters), values)


def load_ratings(path: Path | str) -> list[LikertRating]:
    """Read a ratings.ndjson file of per-rater Likert rows."""
    ratings = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            ratings.append(
                LikertRating(
                    rater_id=obj["rater_id"],
                    target_id=obj["target_id"],
                    fluency=int(obj["fluency"]),
                    accuracy=int(obj["accuracy"]),
                    angle_quality=int(obj["angle_quality"]),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}:{line_no}: {exc}") from exc
    return ratings


def icc_consistency(matrix) -> float:
    """Two-way mixed-effects, consistency, single-rater ICC(3,1).

    (MS_rows - MS_error) / (MS_rows + (k - 1) * MS_error), with MS_rows the
    between-target mean square and MS_error the residual after removing the
    per-rater effect. May be negative; returned unclamped.
    """
    if isinstance(matrix, RatingMatrix):
        grid = matrix.as_array()
    else:
        grid = np.asarray(matrix, dtype=np.float64)
    if grid.ndim != 2:
        raise ValueError(f"rating matrix must be 2-D, got shape {grid.shape}")
    n, k = grid.shape
    if n < 2 or k < 2:
        raise ValueError(f"need >= 2 targets and >= 2 raters, got {n} x {k}")
    if not np.all(np.isfinite(grid)):
        raise ValueError("rating matrix has missing or non-finite cells")

    grand = grid.mean()
    row_means = grid.mean(axis=1)
    col_means = grid.mean(axis=0)
    ss_rows = k * float(((row_means - grand) ** 2).sum())
    if ss_rows == 0.0:
        raise ValueError("degenerate matrix: zero between-target variance")
    residual = grid - row_means[:, None] - col_means[None, :] + grand
    ss_error = float((residual**2).sum())
    ms_rows = ss_rows / (n - 1)
    ms_error = ss_error / ((n - 1) * (k - 1))
    return (ms_rows - ms_error) / (ms_rows + (k - 1) * ms_error)
