import math

import numpy as np
import pytest

from lexshift.corpus import Document, GenderLabel, Split
from lexshift.errors import ValidationError
from lexshift.ngrams import (
    END_TOKEN,
    START_TOKEN,
    NGramTable,
    add_boundaries,
    build_table,
    load_table_tsv,
    save_table_tsv,
)


def make_doc(tokens, doc_id="d", split=Split.TRAIN):
    return Document(
        id=doc_id,
        raw_text=" ".join(tokens),
        tokens=tuple(tokens),
        label=GenderLabel.MALE,
        split=split,
        degenerate=not tokens,
    )


def brute_force_counts(docs, order):
    counts = {}
    for doc in docs:
        toks = list(doc.tokens)
        for i in range(len(toks) - order + 1):
            gram = tuple(toks[i : i + order])
            counts[gram] = counts.get(gram, 0) + 1
    return counts


class TestBuild:
    def test_direct_windowing(self):
        table = build_table([make_doc([START_TOKEN, "a", "b", END_TOKEN])])
        assert table.counts[1] == {
            (START_TOKEN,): 1, ("a",): 1, ("b",): 1, (END_TOKEN,): 1,
        }
        assert table.counts[2] == {
            (START_TOKEN, "a"): 1, ("a", "b"): 1, ("b", END_TOKEN): 1,
        }
        assert table.total_unigrams == 4

    def test_additivity(self):
        doc = make_doc([START_TOKEN, "a", "b", END_TOKEN])
        single = build_table([doc])
        double = build_table([doc, make_doc(doc.tokens, doc_id="d2")])
        for order in range(1, 5):
            assert double.counts[order] == {
                g: 2 * c for g, c in single.counts[order].items()
            }

    def test_short_doc_has_no_fourgrams(self):
        table = build_table([make_doc(["a", "b", "c"])])
        assert table.counts[4] == {}
        assert table.max_count[4] == 0

    def test_matches_brute_force_on_random_corpus(self):
        rng = np.random.default_rng(11)
        vocab = [f"w{i}" for i in range(6)]
        docs = [
            make_doc(
                add_boundaries([vocab[rng.integers(6)] for _ in range(rng.integers(1, 12))]),
                doc_id=f"d{k}",
            )
            for k in range(25)
        ]
        table = build_table(docs)
        for order in range(1, 5):
            assert table.counts[order] == brute_force_counts(docs, order)
            expected_max = max(table.counts[order].values(), default=0)
            assert table.max_count[order] == expected_max

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValidationError):
            build_table([])

    def test_non_train_split_rejected(self):
        with pytest.raises(ValidationError):
            build_table([make_doc(["a"], split=Split.TEST)])


class TestNormalizedCount:
    def test_most_frequent_unigram_is_one(self):
        table = build_table([make_doc(["a", "a", "b"])])
        assert table.normalized_count(("a",)) == 1.0

    def test_unseen_gram_is_zero(self):
        table = build_table([make_doc(["a", "b"])])
        assert table.normalized_count(("x", "y", "z", "w")) == 0.0

    def test_half_of_max(self):
        table = build_table([make_doc(["a", "a", "a", "a", "b", "b"])])
        # brute force: a appears 4 times (max), b twice
        assert table.normalized_count(("b",)) == pytest.approx(0.5)

    def test_bad_order_rejected(self):
        table = build_table([make_doc(["a"])])
        with pytest.raises(ValueError):
            table.normalized_count(())
        with pytest.raises(ValueError):
            table.normalized_count(("a",) * 5)

    def test_bounded_and_monotone(self):
        rng = np.random.default_rng(7)
        vocab = ["x", "y", "z"]
        docs = [
            make_doc([vocab[rng.integers(3)] for _ in range(20)], doc_id=f"d{k}")
            for k in range(5)
        ]
        table = build_table(docs)
        values = {g: table.normalized_count(g) for g in table.counts[2]}
        assert all(0.0 <= v <= 1.0 for v in values.values())
        ordered = sorted(table.counts[2].items(), key=lambda kv: kv[1])
        for (g1, c1), (g2, c2) in zip(ordered, ordered[1:]):
            if c1 <= c2:
                assert values[g1] <= values[g2]


class TestPerplexity:
    def test_uniform_over_vocab(self):
        # empty table, pure smoothing: every token gets probability 1/V
        table = NGramTable()
        doc = make_doc(["w1", "w2", "w3", "w4", "w5"], split=Split.TEST)
        assert table.perplexity(doc) == pytest.approx(5.0)

    def test_single_token_vocabulary(self):
        # hand oracle: the one unigram matches with relative frequency 1
        table = build_table([make_doc(["a"])])
        doc = make_doc(["a"], split=Split.TEST)
        assert table.perplexity(doc) == pytest.approx(1.0)

    def test_verbatim_beats_random(self):
        rng = np.random.default_rng(3)
        vocab = [f"w{i}" for i in range(12)]
        train_tokens = [vocab[rng.integers(12)] for _ in range(60)]
        table = build_table([make_doc(train_tokens)])
        verbatim = make_doc(train_tokens[10:30], doc_id="v", split=Split.TEST)
        random_doc = make_doc(
            [vocab[rng.integers(12)] for _ in range(20)], doc_id="r", split=Split.TEST
        )
        assert table.perplexity(verbatim) < table.perplexity(random_doc)

    def test_at_least_one(self):
        rng = np.random.default_rng(5)
        vocab = ["a", "b", "c"]
        table = build_table([make_doc([vocab[rng.integers(3)] for _ in range(30)])])
        for k in range(10):
            doc = make_doc(
                [vocab[rng.integers(3)] for _ in range(rng.integers(1, 15))],
                doc_id=f"q{k}",
                split=Split.TEST,
            )
            assert table.perplexity(doc) >= 1.0 - 1e-12

    def test_degenerate_doc_rejected(self):
        table = build_table([make_doc(["a"])])
        with pytest.raises(ValidationError):
            table.perplexity(make_doc([], doc_id="e", split=Split.TEST))


class TestTsvRoundTrip:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(13)
        docs = [
            make_doc(
                add_boundaries([f"w{rng.integers(5)}" for _ in range(rng.integers(1, 9))]),
                doc_id=f"d{k}",
            )
            for k in range(10)
        ]
        table = build_table(docs)
        path = tmp_path / "lm.tsv"
        save_table_tsv(table, path)
        loaded = load_table_tsv(path)
        assert loaded.counts == table.counts
        assert loaded.max_count == table.max_count
        assert loaded.total_unigrams == table.total_unigrams

    def test_sorted_deterministic_output(self, tmp_path):
        table = build_table([make_doc(["b", "a", "b"])])
        p1, p2 = tmp_path / "a.tsv", tmp_path / "b.tsv"
        save_table_tsv(table, p1)
        save_table_tsv(table, p2)
        assert p1.read_bytes() == p2.read_bytes()
        lines = p1.read_text().splitlines()
        assert lines[0].startswith("1\ta\t")


def test_add_boundaries():
    assert add_boundaries(["x"]) == [START_TOKEN, "x", END_TOKEN]


def test_perplexity_backoff_prefers_seen_context():
    # "a b" is a trained bigram: scoring "a b" must use the bigram estimate,
    # which the hand computation puts at exactly count(ab)/count(a)
    table = build_table([make_doc(["a", "b", "a", "c"])])
    doc = make_doc(["a", "b"], doc_id="q", split=Split.TEST)
    # position 0: unigram a: 2/4; position 1: bigram (a, b): 1/2
    expected = math.exp(-(math.log(2 / 4) + math.log(1 / 2)) / 2)
    assert table.perplexity(doc) == pytest.approx(expected)
