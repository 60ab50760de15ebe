import pytest
from dataclasses import replace

from lexshift import doc_classifier, synthetic, token_classifier
from lexshift.corpus import Split
from lexshift.ngrams import add_boundaries, build_table
from lexshift.tagging import ADJ_ADV, LexiconTagger


@pytest.fixture(scope="session")
def world():
    return synthetic.build_world(seed=0)


@pytest.fixture(scope="session")
def tagger(world):
    return LexiconTagger(world.lexicon)


@pytest.fixture(scope="session")
def doc_model(world):
    return doc_classifier.train(world.split(Split.TRAIN), doc_classifier.desk_config(seed=1))


@pytest.fixture(scope="session")
def token_model(world, tagger):
    training_set = token_classifier.build_training_set(
        world.split(Split.TRAIN), tagger, ADJ_ADV
    )
    return token_classifier.train_token_model(
        training_set, token_classifier.desk_config(seed=2)
    )


@pytest.fixture(scope="session")
def lm_table(world):
    wrapped = [
        replace(d, tokens=tuple(add_boundaries(d.tokens)))
        for d in world.split(Split.TRAIN)
    ]
    return build_table(wrapped)
