import math

import numpy as np
import pytest

from lexshift.embeddings import EmbeddingStore, Suggestion, cosine, load_vec_text, save_vec_text
from lexshift.errors import OOVError, ParseError, ValidationError


class TestCosine:
    def test_identical_vectors(self):
        assert cosine([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1, 0], [0, 1]) == pytest.approx(0.0)

    def test_forty_five_degrees(self):
        assert cosine([1, 1], [1, 0]) == pytest.approx(1 / math.sqrt(2), abs=1e-8)

    def test_symmetry_and_scaling(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            a = rng.normal(size=6)
            b = rng.normal(size=6)
            assert cosine(a, b) == pytest.approx(cosine(b, a))
            assert cosine(a, 3.7 * a) == pytest.approx(1.0)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            cosine([0, 0], [1, 0])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            cosine([1, 2], [1, 2, 3])


class TestLoadVecText:
    def test_basic(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\ncat 1 0 0\ndog 0 1 0\n")
        store = load_vec_text(path)
        assert len(store) == 2 and store.dim == 3
        assert "cat" in store and "rat" not in store
        np.testing.assert_array_equal(store.vector("dog"), [0, 1, 0])

    def test_wrong_component_count_names_line(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\ncat 1 0 0\ndog 0 1\n")
        with pytest.raises(ParseError, match=r":3:"):
            load_vec_text(path)

    def test_duplicate_token_named(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 2\ncat 1 0\ncat 0 1\n")
        with pytest.raises(ParseError, match="cat"):
            load_vec_text(path)

    def test_non_numeric_component(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("1 2\ncat 1 x\n")
        with pytest.raises(ParseError, match="non-numeric"):
            load_vec_text(path)

    def test_header_count_mismatch(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("3 2\ncat 1 0\n")
        with pytest.raises(ParseError, match="promised"):
            load_vec_text(path)

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        tokens = [f"tok{i}" for i in range(7)]
        store = EmbeddingStore(tokens, rng.normal(size=(7, 5)))
        path = tmp_path / "v.vec"
        save_vec_text(store, path)
        loaded = load_vec_text(path)
        assert loaded.vocab == store.vocab
        np.testing.assert_allclose(loaded.vectors, store.vectors)


class TestMostSimilar:
    def build_known_store(self):
        # feline nearly parallel to cat, rocket orthogonal
        return EmbeddingStore(
            ["cat", "feline", "rocket"],
            np.array([[1.0, 0.0, 0.0], [0.999, 0.04, 0.0], [0.0, 0.0, 1.0]]),
        )

    def test_known_angles(self):
        store = self.build_known_store()
        (top,) = store.most_similar("cat", top_n=1)
        assert top.token == "feline"
        assert top.similarity == pytest.approx(
            cosine(store.vector("cat"), store.vector("feline"))
        )

    def test_exhaustive_return(self):
        store = self.build_known_store()
        result = store.most_similar("cat", top_n=99)
        assert [s.token for s in result] == ["feline", "rocket"]
        sims = [s.similarity for s in result]
        assert sims == sorted(sims, reverse=True)

    def test_oov_query(self):
        with pytest.raises(OOVError):
            self.build_known_store().most_similar("dog")

    def test_matches_brute_force_scan(self):
        rng = np.random.default_rng(9)
        tokens = [f"w{i:03d}" for i in range(80)]
        store = EmbeddingStore(tokens, rng.normal(size=(80, 6)))
        for query in ("w000", "w041", "w079"):
            expected = sorted(
                (
                    (other, cosine(store.vector(other), store.vector(query)))
                    for other in tokens
                    if other != query
                ),
                key=lambda kv: (-kv[1], kv[0]),
            )[:10]
            got = store.most_similar(query, top_n=10)
            assert [s.token for s in got] == [t for t, _ in expected]
            np.testing.assert_allclose(
                [s.similarity for s in got], [v for _, v in expected], atol=1e-12
            )

    def test_lexicographic_tie_break(self):
        store = EmbeddingStore(
            ["query", "bbb", "aaa"],
            np.array([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]),
        )
        result = store.most_similar("query", top_n=2)
        assert [s.token for s in result] == ["aaa", "bbb"]
        assert all(s.similarity == pytest.approx(1.0) for s in result)

    def test_deterministic_across_runs(self):
        rng = np.random.default_rng(10)
        vectors = rng.normal(size=(40, 5))
        a = EmbeddingStore([f"t{i}" for i in range(40)], vectors.copy())
        b = EmbeddingStore([f"t{i}" for i in range(40)], vectors.copy())
        assert a.most_similar("t3", 7) == b.most_similar("t3", 7)


def test_store_rejects_duplicates_and_zero_rows():
    with pytest.raises(ValidationError, match="duplicate"):
        EmbeddingStore(["a", "a"], np.eye(2))
    with pytest.raises(ValidationError, match="zero"):
        EmbeddingStore(["a", "b"], np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_suggestion_is_plain_record():
    s = Suggestion(token="x", similarity=0.5)
    assert (s.token, s.similarity) == ("x", 0.5)
