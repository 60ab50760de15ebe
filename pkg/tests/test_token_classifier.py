import numpy as np
import pytest

from lexshift import synthetic, token_classifier
from lexshift.corpus import Document, GenderLabel, Split
from lexshift.errors import ValidationError
from lexshift.tagging import ADJ_ADV, LexiconTagger, PosTag, TagScope
from lexshift.token_classifier import (
    TokenTrainingSet,
    build_training_set,
    classify_token,
    load_token_model,
    save_token_model,
    train_token_model,
)


def make_doc(tokens, doc_id, label, split=Split.TRAIN):
    return Document(
        id=doc_id,
        raw_text=" ".join(tokens),
        tokens=tuple(tokens),
        label=label,
        split=split,
    )


class TestBuildTrainingSet:
    def test_single_extraction(self):
        docs = [make_doc(["the", "remarkable", "view"], "d1", GenderLabel.MALE)]
        tagger = LexiconTagger({"remarkable": PosTag.ADJECTIVE})
        ts = build_training_set(docs, tagger, TagScope.of(PosTag.ADJECTIVE))
        assert ts.pairs == [("remarkable", GenderLabel.MALE)]

    def test_empty_scope_result_rejected(self):
        docs = [make_doc(["plain", "words"], "d1", GenderLabel.MALE)]
        tagger = LexiconTagger({})
        with pytest.raises(ValidationError, match="scope"):
            build_training_set(docs, tagger, TagScope.of(PosTag.ADJECTIVE))

    def test_duplicates_kept_across_labels(self):
        docs = [
            make_doc(["salty"], "d1", GenderLabel.MALE),
            make_doc(["salty"], "d2", GenderLabel.FEMALE),
        ]
        tagger = LexiconTagger({"salty": PosTag.ADJECTIVE})
        ts = build_training_set(docs, tagger, TagScope.of(PosTag.ADJECTIVE))
        assert sorted(label.value for _, label in ts.pairs) == ["female", "male"]

    def test_non_train_split_rejected(self):
        docs = [make_doc(["salty"], "d1", GenderLabel.MALE, Split.TEST)]
        tagger = LexiconTagger({"salty": PosTag.ADJECTIVE})
        with pytest.raises(ValidationError):
            build_training_set(docs, tagger, TagScope.of(PosTag.ADJECTIVE))


@pytest.fixture(scope="module")
def separable_model():
    pairs = synthetic.token_pairs(seed=21, per_gender=120)
    return train_token_model(
        TokenTrainingSet(pairs=pairs), token_classifier.desk_config(seed=4)
    )


class TestTrainTokenModel:
    def test_suffix_rule_generalizes(self, separable_model):
        held_out = synthetic.token_pairs(seed=77, per_gender=80)
        correct = sum(
            1
            for token, label in held_out
            if classify_token(separable_model, token)[0] is label
        )
        assert correct / len(held_out) >= 0.95

    def test_single_label_rejected(self):
        pairs = [("aelle", GenderLabel.FEMALE), ("belle", GenderLabel.FEMALE)]
        with pytest.raises(ValidationError, match="single label"):
            train_token_model(TokenTrainingSet(pairs=pairs), token_classifier.desk_config())

    def test_loss_decreased(self, separable_model):
        assert separable_model.training_losses[-1] < separable_model.training_losses[0]

    def test_seed_changes_weights_not_skill(self):
        pairs = synthetic.token_pairs(seed=21, per_gender=120)
        m1 = train_token_model(TokenTrainingSet(pairs=pairs), token_classifier.desk_config(seed=4))
        m2 = train_token_model(TokenTrainingSet(pairs=pairs), token_classifier.desk_config(seed=14))
        assert any(
            not np.array_equal(m1.params[n], m2.params[n]) for n in m1.params
        )
        held_out = synthetic.token_pairs(seed=78, per_gender=60)
        for model in (m1, m2):
            correct = sum(
                1 for tok, lab in held_out if classify_token(model, tok)[0] is lab
            )
            assert correct / len(held_out) >= 0.95


class TestClassifyToken:
    def test_short_token_padded(self, separable_model):
        label, prob = classify_token(separable_model, "ab")
        assert 0.0 <= prob <= 1.0

    def test_fully_unseen_characters(self, separable_model):
        label, prob = classify_token(separable_model, "ΩЖ中π!")
        assert label in (GenderLabel.MALE, GenderLabel.FEMALE)

    def test_female_suffix_strongly_female(self, separable_model):
        label, prob = classify_token(separable_model, "mirabelle")
        assert label is GenderLabel.FEMALE
        assert prob >= 0.9

    def test_male_suffix(self, separable_model):
        label, _ = classify_token(separable_model, "brontork")
        assert label is GenderLabel.MALE

    def test_empty_token_rejected(self, separable_model):
        with pytest.raises(ValueError):
            classify_token(separable_model, "")

    def test_totality_on_random_unicode(self, separable_model):
        rng = np.random.default_rng(6)
        alphabet = "abzΩЖ中πé-'9"
        for _ in range(25):
            token = "".join(
                alphabet[rng.integers(len(alphabet))]
                for _ in range(rng.integers(1, 40))
            )
            label, prob = classify_token(separable_model, token)
            assert 0.0 <= prob <= 1.0

    def test_deterministic(self, separable_model):
        assert classify_token(separable_model, "tokelle") == classify_token(
            separable_model, "tokelle"
        )


class TestSerialization:
    def test_round_trip(self, separable_model, tmp_path):
        path = tmp_path / "tok.model"
        save_token_model(separable_model, path)
        loaded = load_token_model(path)
        for token in ("mirabelle", "brontork", "zzz"):
            assert classify_token(loaded, token) == classify_token(separable_model, token)


def test_empty_training_token_rejected():
    with pytest.raises(ValidationError):
        TokenTrainingSet(pairs=[("", GenderLabel.MALE)])
