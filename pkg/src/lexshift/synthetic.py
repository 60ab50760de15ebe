"""Deterministic synthetic corpora with a known, fully separable gender signal.

Every document interleaves neutral filler words with gender-marker words.
Marker surfaces encode gender in their suffix (female "...elle", male
"...ork"), so the character-level classifier has a learnable rule, and each
concept's female/male forms share an embedding direction, so the vector
store suggests the opposite-gender form as the nearest neighbor.

Each concept is "dominant" in one gender: its dominant form is frequent in
that gender's training documents, its recessive opposite-gender form rare.
Test documents use only recessive markers, which makes the dominant
opposite-gender replacement the n-gram-preferred choice at decode time and
gives the transfer engine a clean, measurable win.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from .corpus import Document, GenderLabel, Split, StyleState, write_jsonl
from .embeddings import EmbeddingStore, save_vec_text
from .tagging import PosTag, save_lexicon

FEMALE_SUFFIX = "elle"
MALE_SUFFIX = "ork"

_CONSONANTS = "bdfglmnprst"
_VOWELS = "aeiou"


@dataclass
class ConceptPair:
    female: str
    male: str
    dominant: GenderLabel
    tag: PosTag


@dataclass
class SyntheticWorld:
    docs: list
    lexicon: dict
    store: EmbeddingStore
    concepts: list
    fillers: list
    seed: int

    def split(self, split: Split):
        return [d for d in self.docs if d.split is split]

    @property
    def female_markers(self):
        return {c.female for c in self.concepts}

    @property
    def male_markers(self):
        return {c.male for c in self.concepts}

    def marker_label(self, token) -> GenderLabel | None:
        if token in self.female_markers:
            return GenderLabel.FEMALE
        if token in self.male_markers:
            return GenderLabel.MALE
        return None


def _syllables(rng, count):
    return "".join(
        rng.choice(list(_CONSONANTS)) + rng.choice(list(_VOWELS)) for _ in range(count)
    )


def _fresh_word(rng, taken, count=2):
    while True:
        word = _syllables(rng, count)
        if word not in taken:
            taken.add(word)
            return word


def marker_surface(prefix: str, label: GenderLabel) -> str:
    return prefix + (FEMALE_SUFFIX if label is GenderLabel.FEMALE else MALE_SUFFIX)


def build_world(
    seed: int = 0,
    concepts_per_gender: int = 12,
    fillers: int = 12,
    train_docs_per_label: int = 150,
    dev_docs_per_label: int = 25,
    test_docs_per_label: int = 30,
    markers_per_doc: int = 4,
    recessive_rate: float = 0.3,
    embedding_dim: int = 32,
) -> SyntheticWorld:
    rng = np.random.default_rng(seed)
    taken = set()

    concept_list = []
    for dominant in (GenderLabel.MALE, GenderLabel.FEMALE):
        for k in range(concepts_per_gender):
            prefix = _fresh_word(rng, taken)
            tag = PosTag.ADJECTIVE if k % 2 == 0 else PosTag.ADVERB
            concept_list.append(
                ConceptPair(
                    female=marker_surface(prefix, GenderLabel.FEMALE),
                    male=marker_surface(prefix, GenderLabel.MALE),
                    dominant=dominant,
                    tag=tag,
                )
            )

    filler_words = [_fresh_word(rng, taken) for _ in range(fillers)]

    lexicon = {}
    for concept in concept_list:
        lexicon[concept.female] = concept.tag
        lexicon[concept.male] = concept.tag
    for i, word in enumerate(filler_words[:6]):
        lexicon[word] = PosTag.NOUN if i % 2 == 0 else PosTag.VERB

    def form(concept, label):
        return concept.female if label is GenderLabel.FEMALE else concept.male

    def draw_markers(label, recessive_only):
        dominant_pool = [c for c in concept_list if c.dominant is label]
        recessive_pool = [c for c in concept_list if c.dominant is not label]
        picks = []
        for _ in range(markers_per_doc):
            if recessive_only or rng.random() < recessive_rate:
                concept = recessive_pool[rng.integers(len(recessive_pool))]
            else:
                concept = dominant_pool[rng.integers(len(dominant_pool))]
            picks.append(form(concept, label))
        return picks

    def make_doc(doc_id, label, split, recessive_only):
        markers = draw_markers(label, recessive_only)
        tokens = []
        marker_iter = iter(markers)
        # frame: F M F M F F M F M F
        for slot in "fmfmffmfmf":
            if slot == "m":
                tokens.append(next(marker_iter))
            else:
                tokens.append(filler_words[rng.integers(len(filler_words))])
        return Document(
            id=doc_id,
            raw_text=" ".join(tokens),
            tokens=tuple(tokens),
            label=label,
            split=split,
            style_state=StyleState.SOURCE,
        )

    docs = []
    plan = (
        (Split.TRAIN, train_docs_per_label, False),
        (Split.DEV, dev_docs_per_label, True),
        (Split.TEST, test_docs_per_label, True),
    )
    for split, count, recessive_only in plan:
        for label in (GenderLabel.MALE, GenderLabel.FEMALE):
            for k in range(count):
                docs.append(
                    make_doc(f"{split.value}-{label.value}-{k}", label, split, recessive_only)
                )

    tokens = []
    vectors = []
    for concept in concept_list:
        direction = rng.normal(size=embedding_dim)
        direction /= np.linalg.norm(direction)
        for surface in (concept.female, concept.male):
            jitter = rng.normal(size=embedding_dim)
            jitter /= np.linalg.norm(jitter)
            vec = direction + 0.02 * jitter
            tokens.append(surface)
            vectors.append(vec / np.linalg.norm(vec))
    for word in filler_words:
        direction = rng.normal(size=embedding_dim)
        tokens.append(word)
        vectors.append(direction / np.linalg.norm(direction))
    store = EmbeddingStore(tokens, np.array(vectors))

    return SyntheticWorld(
        docs=docs,
        lexicon=lexicon,
        store=store,
        concepts=concept_list,
        fillers=filler_words,
        seed=seed,
    )


def token_pairs(seed: int = 0, per_gender: int = 150) -> list:
    """Standalone (token, label) pairs following the marker suffix rule."""
    rng = np.random.default_rng(seed)
    taken = set()
    pairs = []
    for _ in range(per_gender):
        prefix = _fresh_word(rng, taken)
        pairs.append((marker_surface(prefix, GenderLabel.FEMALE), GenderLabel.FEMALE))
        pairs.append((marker_surface(prefix, GenderLabel.MALE), GenderLabel.MALE))
    return pairs


def write_world(world: SyntheticWorld, out_dir):
    """Materialize corpus/embeddings/lexicon files for the CLI."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "corpus": os.path.join(out_dir, "corpus.jsonl"),
        "embeddings": os.path.join(out_dir, "embeddings.vec"),
        "lexicon": os.path.join(out_dir, "lexicon.tsv"),
    }
    write_jsonl(world.docs, paths["corpus"])
    save_vec_text(world.store, paths["embeddings"])
    save_lexicon(world.lexicon, paths["lexicon"])
    return paths


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Generate the synthetic separable demo corpus."
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    world = build_world(seed=args.seed)
    paths = write_world(world, args.out)
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
