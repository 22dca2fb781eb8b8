"""Walkthrough: the validation statistics used on ranked output and ratings.

Run with:  python3 demos/05_evaluation_metrics.py
"""

import numpy as np

from cnd.evalmetrics import (
    LikertRating,
    icc_consistency,
    overall_quality,
    precision_at_k,
    ratings_to_matrix,
    spearman,
)

print("== Precision@K against an expert-judged relevant set ==")
ranked = [f"paper{i}" for i in range(15)]
relevant = {f"paper{i}" for i in (0, 1, 2, 4, 5, 6, 8, 9, 11, 12)}
for k in (10, 15):
    print(f"  P@{k} = {precision_at_k(ranked, relevant, k):.2f}")

print("\n== Spearman rank correlation between two score lists ==")
model_scores = [88.0, 75.0, 62.0, 55.0, 40.0, 33.0]
expert_scores = [80.0, 79.0, 60.0, 42.0, 47.0, 30.0]
print(f"  rho = {spearman(model_scores, expert_scores):.3f}")
print("  (rank-based: any strictly increasing rescaling of either list is ignored)")

print("\n== Likert ratings and overall quality ==")
ratings = [
    LikertRating("rater_a", f"abstract{t}", f, a, q)
    for t, (f, a, q) in enumerate([(5, 4, 4), (3, 3, 2), (4, 5, 5), (2, 2, 3), (5, 5, 4)])
] + [
    LikertRating("rater_b", f"abstract{t}", f, a, q)
    for t, (f, a, q) in enumerate([(5, 4, 3), (3, 2, 2), (5, 5, 5), (2, 3, 3), (4, 5, 5)])
]
print(f"  overall quality of first rating: {overall_quality(ratings[0]):.2f}")

print("\n== Inter-rater reliability: two-way consistency ICC(3,1) ==")
matrix = ratings_to_matrix(ratings)
print(f"  grid: {len(matrix.target_ids)} targets x {len(matrix.rater_ids)} raters")
for target, row in zip(matrix.target_ids, matrix.values):
    print(f"    {target}: {row}")
print(f"  ICC(3,1) = {icc_consistency(matrix):.3f}")

offset = np.asarray(matrix.values) + np.array([0.0, 0.7])[None, :]
print(f"  per-rater constant offsets do not hurt consistency: {icc_consistency(offset):.3f}")
