"""Outlet relevance: embeddings, cosine similarity, and top-decile averaging.

Embeddings come from a provider contract so the scoring core stays portable:
a deterministic hashed bag-of-tokens stub for offline use and tests, or a
remote HTTP service for real sentence encoders. Outlet item vectors are
precomputed at ingest and persisted in a packed binary format; query time is
pure array math.
"""

from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Protocol

import numpy as np
import requests

from cnd.textfeat import tokenize

if TYPE_CHECKING:
    from cnd.corpus import OutletProfile

EMBED_URL_ENV = "CND_EMBED_URL"
EMBED_KEY_ENV = "CND_EMBED_API_KEY"

# Items and articles are embedded as one string, truncated to this many
# characters; encoder length limits are the provider's concern beyond that.
DEFAULT_CHAR_BUDGET = 4000


class ProviderError(RuntimeError):
    """A remote provider call failed; the message never carries credentials."""


class EmbeddingProvider(Protocol):
    dim: int

    def embed(self, texts: list[str]) -> list[np.ndarray]: ...


def cosine(a, b) -> float:
    """Cosine similarity of two equal-dimension vectors, clamped to [-1, 1]."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape or va.ndim != 1:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    na = np.linalg.norm(va)
    nb = np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine undefined for zero-norm input")
    return float(np.clip(va @ vb / (na * nb), -1.0, 1.0))


def top_decile_k(n_items: int) -> int:
    """Size of the top-decile similarity set: floor(n/10), but at least 1."""
    return max(1, n_items // 10)


@dataclass(frozen=True)
class RelevanceResult:
    """Outlet relevance of one article: mean of its top-decile similarities."""

    article_id: str
    outlet_id: str
    score: float
    k_used: int
    n_items: int

    def __post_init__(self):
        if self.k_used != top_decile_k(self.n_items):
            raise ValueError(
                f"k_used {self.k_used} does not match top_decile_k({self.n_items})"
            )
        if not -1.0 <= self.score <= 1.0:
            raise ValueError(f"relevance score {self.score} outside [-1, 1]")


def outlet_relevance(
    article_vec, outlet: "OutletProfile", article_id: str = ""
) -> RelevanceResult:
    """Mean cosine similarity between an article and an outlet's nearest items.

    Computes the similarity against every stored item vector, keeps the
    k = max(1, floor(n/10)) largest, and averages them.
    """
    if outlet.item_vectors is None or len(outlet.item_vectors) == 0:
        raise ValueError(f"no items for outlet {outlet.outlet_id!r}")
    a = np.asarray(article_vec, dtype=np.float64)
    matrix = np.asarray(outlet.item_vectors, dtype=np.float64)
    if matrix.shape[1] != a.shape[0]:
        raise ValueError(
            f"dimension mismatch: article {a.shape[0]}, outlet items {matrix.shape[1]}"
        )
    norm_a = np.linalg.norm(a)
    norms = np.linalg.norm(matrix, axis=1)
    if norm_a == 0.0 or np.any(norms == 0.0):
        raise ValueError("cosine undefined for zero-norm input")
    sims = np.clip(matrix @ a / (norms * norm_a), -1.0, 1.0)
    n = len(sims)
    k = top_decile_k(n)
    top = np.partition(sims, n - k)[n - k :]
    return RelevanceResult(
        article_id=article_id,
        outlet_id=outlet.outlet_id,
        score=float(top.mean()),
        k_used=k,
        n_items=n,
    )


def multi_outlet_relevance(results: list[RelevanceResult]) -> float:
    """Unweighted mean of one article's per-outlet relevance scores."""
    if not results:
        raise ValueError("no relevance results to average")
    ids = {r.article_id for r in results}
    if len(ids) > 1:
        raise ValueError(f"results span multiple articles: {sorted(ids)}")
    return sum(r.score for r in results) / len(results)


def stub_embed(text: str, dim: int, seed: int) -> np.ndarray:
    """Deterministic hashed bag-of-tokens embedding, L2-normalized.

    Each token hashes (keyed by the seed) to one coordinate and a sign;
    identical texts always produce identical vectors, with no model or
    network involved.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    tokens = tokenize(text)
    if not tokens:
        raise ValueError("text tokenizes to zero tokens")
    key = f"cnd-stub-{seed}".encode()
    v = np.zeros(dim, dtype=np.float64)
    for token in tokens:
        digest = hashlib.blake2b(token.encode("utf-8"), key=key, digest_size=16).digest()
        index = int.from_bytes(digest[:8], "little") % dim
        sign = 1.0 if digest[8] & 1 else -1.0
        v[index] += sign
    norm = np.linalg.norm(v)
    if norm == 0.0:  # opposite-signed collisions cancelled everything out
        fallback = hashlib.blake2b(text.encode("utf-8"), key=key, digest_size=16).digest()
        v[int.from_bytes(fallback[:8], "little") % dim] = 1.0
        norm = 1.0
    return v / norm


class StubEmbeddingProvider:
    """Offline deterministic provider backed by stub_embed."""

    def __init__(self, dim: int = 256, seed: int = 0):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.dim = dim
        self.seed = seed
        self.calls = 0

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        self.calls += 1
        return [stub_embed(t, self.dim, self.seed) for t in texts]


class HttpEmbeddingProvider:
    """Remote embedding service speaking POST /embed {texts} -> {vectors}."""

    def __init__(
        self,
        url: str | None = None,
        api_key: str | None = None,
        timeout: float = 60.0,
    ):
        self.url = url or os.environ.get(EMBED_URL_ENV, "")
        if not self.url:
            raise ProviderError(f"no embedding endpoint configured ({EMBED_URL_ENV})")
        self.api_key = api_key if api_key is not None else os.environ.get(EMBED_KEY_ENV)
        self.timeout = timeout
        self.dim = 0  # learned from the first response

    def _endpoint(self) -> str:
        base = self.url.rstrip("/")
        return base if base.endswith("/embed") else base + "/embed"

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(
                self._endpoint(), json={"texts": texts}, headers=headers, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise ProviderError(f"embedding request failed: {type(exc).__name__}") from exc
        if resp.status_code != 200:
            raise ProviderError(f"embedding service returned HTTP {resp.status_code}")
        vectors = resp.json().get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ProviderError("embedding service returned a malformed vector list")
        out = [np.asarray(v, dtype=np.float64) for v in vectors]
        dims = {v.shape[0] for v in out}
        if len(dims) > 1:
            raise ProviderError(f"embedding service returned mixed dimensions {sorted(dims)}")
        if out:
            self.dim = out[0].shape[0]
        return out


def embed_matrix(provider: EmbeddingProvider, texts: list[str]) -> np.ndarray:
    """Embed texts and stack into a (count, dim) float32 matrix."""
    vectors = provider.embed(texts)
    return np.vstack([v.astype(np.float32) for v in vectors])


def write_vectors(path: Path | str, ids: list[str], matrix: np.ndarray) -> None:
    """Write a packed f32 vector file plus its line-aligned .ids sidecar.

    Layout: little-endian u32 dim, u32 count, then count*dim float32 values.
    """
    path = Path(path)
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    if matrix.ndim != 2:
        raise ValueError(f"{path}: expected a 2-D matrix, got shape {matrix.shape}")
    count, dim = matrix.shape
    if len(ids) != count:
        raise ValueError(f"{path}: {len(ids)} ids for {count} vectors")
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(struct.pack("<II", dim, count))
        fh.write(matrix.tobytes())
    path.with_suffix(".ids").write_text(
        "".join(i + "\n" for i in ids), encoding="utf-8"
    )


def read_vectors(path: Path | str) -> tuple[list[str], np.ndarray]:
    """Inverse of write_vectors; validates sizes and the ids sidecar."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 8:
        raise ValueError(f"{path}: truncated vector file")
    dim, count = struct.unpack("<II", raw[:8])
    expected = 8 + 4 * dim * count
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, found {len(raw)}")
    matrix = np.frombuffer(raw[8:], dtype="<f4").reshape(count, dim).copy()
    ids_path = path.with_suffix(".ids")
    ids = ids_path.read_text(encoding="utf-8").splitlines()
    if len(ids) != count:
        raise ValueError(f"{ids_path}: {len(ids)} ids for {count} vectors")
    return ids, matrix
