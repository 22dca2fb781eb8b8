"""Cosine, top-decile outlet relevance (vs brute force), stub embeddings, codec."""

import math

import numpy as np
import pytest
from oracles import oracle_relevance

from cnd.corpus import OutletProfile
from cnd.relevance import (
    RelevanceResult,
    StubEmbeddingProvider,
    cosine,
    multi_outlet_relevance,
    outlet_relevance,
    read_vectors,
    stub_embed,
    top_decile_k,
    write_vectors,
)


def outlet(vectors: np.ndarray, outlet_id: str = "o1") -> OutletProfile:
    return OutletProfile(
        outlet_id=outlet_id,
        name="Outlet",
        url="https://example.org/",
        outlet_type="tech_news",
        item_vectors=vectors,
        vector_ids=[f"i{n}" for n in range(len(vectors))],
    )


class TestCosine:
    def test_self_similarity(self):
        assert cosine([3.0, 4.0], [3.0, 4.0]) == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0, abs=1e-12)

    def test_hand_value(self):
        # dot = 4, norms = sqrt(5) * sqrt(5) = 5
        assert cosine([1.0, 2.0], [2.0, 1.0]) == pytest.approx(0.8, abs=1e-9)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            cosine([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_zero_norm(self):
        with pytest.raises(ValueError, match="zero-norm"):
            cosine([0.0, 0.0], [1.0, 2.0])

    def test_properties_random_pairs(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            dim = int(rng.integers(2, 64))
            a = rng.normal(size=dim)
            b = rng.normal(size=dim)
            c = cosine(a, b)
            assert -1.0 <= c <= 1.0
            assert cosine(b, a) == pytest.approx(c, abs=1e-12)
            alpha = float(rng.uniform(0.1, 10))
            assert cosine(alpha * a, b) == pytest.approx(c, abs=1e-9)


class TestOutletRelevance:
    def test_twenty_items_prescribed_similarities(self):
        # items built so cosine(article, item_i) = 0.05 * i for i = 1..20
        sims = [0.05 * i for i in range(1, 21)]
        items = np.array([[c, math.sqrt(1 - c * c)] for c in sims])
        result = outlet_relevance(np.array([1.0, 0.0]), outlet(items), article_id="a1")
        assert result.k_used == 2
        assert result.n_items == 20
        assert result.score == pytest.approx((1.0 + 0.95) / 2, abs=1e-9)

    def test_small_outlet_uses_max(self):
        sims = [0.1, 0.5, 0.3, 0.2, 0.4]
        items = np.array([[c, math.sqrt(1 - c * c)] for c in sims])
        result = outlet_relevance(np.array([1.0, 0.0]), outlet(items))
        assert result.k_used == 1
        assert result.score == pytest.approx(0.5, abs=1e-9)

    def test_identical_items_score_one(self):
        items = np.tile(np.array([2.0, 1.0]), (7, 1))
        result = outlet_relevance(np.array([2.0, 1.0]), outlet(items))
        assert result.score == pytest.approx(1.0, abs=1e-9)

    def test_empty_outlet_errors(self):
        with pytest.raises(ValueError, match="no items"):
            outlet_relevance(np.array([1.0, 0.0]), outlet(np.zeros((0, 2))))

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            n = int(rng.integers(1, 60))
            dim = int(rng.integers(2, 16))
            article = rng.normal(size=dim)
            items = rng.normal(size=(n, dim))
            result = outlet_relevance(article, outlet(items))
            expected, k = oracle_relevance(article.tolist(), items.tolist())
            assert result.k_used == k == top_decile_k(n)
            assert result.score == pytest.approx(expected, abs=1e-9)

    def test_item_order_invariance(self):
        rng = np.random.default_rng(12)
        article = rng.normal(size=8)
        items = rng.normal(size=(23, 8))
        base = outlet_relevance(article, outlet(items)).score
        for _ in range(5):
            shuffled = items[rng.permutation(len(items))]
            assert outlet_relevance(article, outlet(shuffled)).score == pytest.approx(
                base, abs=1e-12
            )

    def test_low_similarity_addition_keeps_selection(self):
        # Below-threshold additions cannot change the selected set unless n
        # crosses a decile boundary and k itself grows.
        rng = np.random.default_rng(21)
        article = np.array([1.0, 0.0])
        sims = sorted(rng.uniform(0.2, 0.9, size=25), reverse=True)
        items = np.array([[c, math.sqrt(1 - c * c)] for c in sims])
        before = outlet_relevance(article, outlet(items))
        assert before.k_used == 2
        low = 0.05
        extended = np.vstack([items, [[low, math.sqrt(1 - low * low)]]])
        after = outlet_relevance(article, outlet(extended))
        assert after.k_used == top_decile_k(26) == 2
        assert after.score == pytest.approx(before.score, abs=1e-12)

    def test_k_grows_at_decile_boundary(self):
        article = np.array([1.0, 0.0])
        sims = [0.9 - 0.01 * i for i in range(29)]
        items = np.array([[c, math.sqrt(1 - c * c)] for c in sims])
        assert outlet_relevance(article, outlet(items)).k_used == 2
        extended = np.vstack([items, [[0.05, math.sqrt(1 - 0.05**2)]]])
        assert outlet_relevance(article, outlet(extended)).k_used == 3


class TestMultiOutletRelevance:
    def _result(self, score, outlet_id, n=10):
        return RelevanceResult("a1", outlet_id, score, top_decile_k(n), n)

    def test_mean_of_two(self):
        results = [self._result(0.4, "o1"), self._result(0.6, "o2")]
        assert multi_outlet_relevance(results) == pytest.approx(0.5)

    def test_single_outlet_identity(self):
        assert multi_outlet_relevance([self._result(0.37, "o1")]) == pytest.approx(0.37)

    def test_hand_mean_of_three(self):
        results = [self._result(s, f"o{i}") for i, s in enumerate((0.2, 0.3, 0.7))]
        assert multi_outlet_relevance(results) == pytest.approx(0.4)

    def test_empty_errors(self):
        with pytest.raises(ValueError):
            multi_outlet_relevance([])

    def test_mixed_articles_rejected(self):
        results = [
            RelevanceResult("a1", "o1", 0.5, 1, 5),
            RelevanceResult("a2", "o2", 0.5, 1, 5),
        ]
        with pytest.raises(ValueError, match="multiple articles"):
            multi_outlet_relevance(results)


class TestStubEmbed:
    def test_deterministic(self):
        a = stub_embed("same text twice", dim=64, seed=3)
        b = stub_embed("same text twice", dim=64, seed=3)
        assert np.array_equal(a, b)

    def test_unit_norm(self):
        for text in ("one", "two words", "a much longer sentence with many words"):
            v = stub_embed(text, dim=128, seed=0)
            assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-9)

    def test_disjoint_token_fixtures_nearly_orthogonal(self):
        a = stub_embed("quantum entanglement decoherence photon qubit", 1024, seed=0)
        b = stub_embed("soccer stadium crowd referee goal", 1024, seed=0)
        assert abs(cosine(a, b)) < 0.5

    def test_zero_tokens_errors(self):
        with pytest.raises(ValueError, match="zero tokens"):
            stub_embed("...", dim=16, seed=0)

    def test_seed_changes_vector(self):
        a = stub_embed("seed sensitivity check", dim=256, seed=1)
        b = stub_embed("seed sensitivity check", dim=256, seed=2)
        assert not np.allclose(a, b)

    def test_provider_batches(self):
        provider = StubEmbeddingProvider(dim=32, seed=5)
        vectors = provider.embed(["first text", "second text"])
        assert len(vectors) == 2
        assert all(v.shape == (32,) for v in vectors)
        assert np.array_equal(vectors[0], stub_embed("first text", 32, 5))


class TestVectorFiles:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(6)
        matrix = rng.normal(size=(11, 7)).astype(np.float32)
        ids = [f"item-{i}" for i in range(11)]
        path = tmp_path / "vectors" / "o1.f32"
        write_vectors(path, ids, matrix)
        loaded_ids, loaded = read_vectors(path)
        assert loaded_ids == ids
        assert loaded.dtype == np.float32
        assert np.array_equal(loaded, matrix)

    def test_truncated_file_errors(self, tmp_path):
        path = tmp_path / "bad.f32"
        path.write_bytes(b"\x01\x00")
        with pytest.raises(ValueError, match="truncated"):
            read_vectors(path)

    def test_size_mismatch_errors(self, tmp_path):
        import struct

        path = tmp_path / "bad.f32"
        path.write_bytes(struct.pack("<II", 4, 3) + b"\x00" * 10)
        with pytest.raises(ValueError, match="expected"):
            read_vectors(path)

    def test_ids_mismatch_errors(self, tmp_path):
        matrix = np.zeros((2, 3), dtype=np.float32)
        with pytest.raises(ValueError, match="ids"):
            write_vectors(tmp_path / "x.f32", ["only-one"], matrix)
