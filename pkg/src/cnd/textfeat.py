"""Tokenization, jargon/readability profiling, and feature extraction.

The feature inventory is fixed and versioned so trained models and stored
feature files stay mutually compatible: eight scalar features over the
article text followed by one 0/1 flag per configured category.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from cnd.corpus import ArticleRecord

FEATURE_SCHEMA_VERSION = "fv1"

JARGON_TIERS = ("easy", "medium", "hard")

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_SENTENCE_END_RE = re.compile(r"[.!?](?=\s|$)")


def tokenize(text: str) -> list[str]:
    """Lowercase maximal runs of letters and digits, in order of appearance."""
    return _TOKEN_RE.findall(text.lower())


def count_sentences(text: str) -> int:
    """Number of '.', '!' or '?' terminators followed by whitespace or the end."""
    return len(_SENTENCE_END_RE.findall(text))


@dataclass(frozen=True)
class JargonTaxonomy:
    """Word -> easy/medium/hard tier map; unknown words resolve to hard."""

    tiers: dict[str, str]

    def __post_init__(self):
        if not self.tiers:
            raise ValueError("jargon taxonomy is empty")
        for word, tier in self.tiers.items():
            if word != word.lower():
                raise ValueError(f"taxonomy word {word!r} is not lowercase")
            if tier not in JARGON_TIERS:
                raise ValueError(f"taxonomy word {word!r} has unknown tier {tier!r}")

    def tier(self, word: str) -> str:
        return self.tiers.get(word, "hard")


def load_taxonomy(path: Path | str) -> JargonTaxonomy:
    """Read a taxonomy.tsv file of ``word<TAB>easy|medium|hard`` lines."""
    tiers: dict[str, str] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{line_no}: expected 'word<TAB>tier', got {line!r}")
        tiers[parts[0].strip().lower()] = parts[1].strip()
    return JargonTaxonomy(tiers)


def jargon_profile(
    tokens: list[str], taxonomy: JargonTaxonomy
) -> tuple[float, float, float]:
    """Fractions of tokens in the easy/medium/hard tiers; unknown counts as hard.

    The three fractions sum to 1 for any nonempty token list.
    """
    if not tokens:
        raise ValueError("no tokens")
    counts = {tier: 0 for tier in JARGON_TIERS}
    for token in tokens:
        counts[taxonomy.tier(token)] += 1
    n = len(tokens)
    return counts["easy"] / n, counts["medium"] / n, counts["hard"] / n


@dataclass(frozen=True)
class FeatureVector:
    """Ordered, versioned feature values feeding the newsworthiness model.

    Scalar features describe the abstract; the title contributes its own token
    count; category_flags mark membership of each configured category, in the
    configured order.
    """

    n_tokens: int
    n_sentences: int
    mean_word_length: float
    frac_easy: float
    frac_medium: float
    frac_hard: float
    frac_numeric_tokens: float
    title_token_count: int
    category_flags: tuple[int, ...] = ()
    schema_version: str = FEATURE_SCHEMA_VERSION

    N_SCALAR_FEATURES = 8

    def __post_init__(self):
        fracs = (self.frac_easy, self.frac_medium, self.frac_hard, self.frac_numeric_tokens)
        if any(not 0.0 <= f <= 1.0 for f in fracs):
            raise ValueError(f"feature fractions outside [0, 1]: {fracs}")
        if self.n_tokens > 0:
            total = self.frac_easy + self.frac_medium + self.frac_hard
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"jargon fractions sum to {total}, expected 1")
        if any(flag not in (0, 1) for flag in self.category_flags):
            raise ValueError(f"category flags must be 0/1: {self.category_flags}")

    @property
    def arity(self) -> int:
        return self.N_SCALAR_FEATURES + len(self.category_flags)

    def to_array(self) -> np.ndarray:
        return np.array(
            [
                float(self.n_tokens),
                float(self.n_sentences),
                self.mean_word_length,
                self.frac_easy,
                self.frac_medium,
                self.frac_hard,
                self.frac_numeric_tokens,
                float(self.title_token_count),
                *map(float, self.category_flags),
            ],
            dtype=np.float64,
        )

    @classmethod
    def from_array(
        cls, values, schema_version: str = FEATURE_SCHEMA_VERSION
    ) -> "FeatureVector":
        values = list(values)
        if len(values) < cls.N_SCALAR_FEATURES:
            raise ValueError(f"feature array too short: {len(values)}")
        return cls(
            n_tokens=int(values[0]),
            n_sentences=int(values[1]),
            mean_word_length=float(values[2]),
            frac_easy=float(values[3]),
            frac_medium=float(values[4]),
            frac_hard=float(values[5]),
            frac_numeric_tokens=float(values[6]),
            title_token_count=int(values[7]),
            category_flags=tuple(int(v) for v in values[cls.N_SCALAR_FEATURES :]),
            schema_version=schema_version,
        )

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "values": self.to_array().tolist(),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FeatureVector":
        return cls.from_array(
            obj["values"], schema_version=obj.get("schema_version", FEATURE_SCHEMA_VERSION)
        )


def feature_names(category_list: list[str]) -> list[str]:
    """Column names matching FeatureVector.to_array order."""
    return [
        "n_tokens",
        "n_sentences",
        "mean_word_length",
        "frac_easy",
        "frac_medium",
        "frac_hard",
        "frac_numeric_tokens",
        "title_token_count",
        *[f"cat:{c}" for c in category_list],
    ]


def extract_features(
    article: "ArticleRecord",
    taxonomy: JargonTaxonomy,
    category_list: list[str],
) -> FeatureVector:
    """Deterministic feature vector for one article.

    Raises ValueError when the abstract tokenizes to zero tokens.
    """
    tokens = tokenize(article.abstract)
    if not tokens:
        raise ValueError(f"article {article.id!r}: abstract tokenizes to zero tokens")
    frac_easy, frac_medium, frac_hard = jargon_profile(tokens, taxonomy)
    numeric = sum(1 for t in tokens if t.isdigit())
    return FeatureVector(
        n_tokens=len(tokens),
        n_sentences=count_sentences(article.abstract),
        mean_word_length=sum(len(t) for t in tokens) / len(tokens),
        frac_easy=frac_easy,
        frac_medium=frac_medium,
        frac_hard=frac_hard,
        frac_numeric_tokens=numeric / len(tokens),
        title_token_count=len(tokenize(article.title)),
        category_flags=tuple(
            1 if c in article.categories else 0 for c in category_list
        ),
    )
