"""lexshift: lexical gender style transfer with an n-gram beam-search decoder.

Pipeline: preprocess -> detect style-representative tokens by POS tag ->
retrieve embedding neighbors -> keep target-gender candidates via a
character-level classifier -> decode the most fluent combination with a
beam search scored on 1..4-gram counts. Ships a document-level gender
classifier as the automatic evaluator plus trade-off / t-test / kappa /
BLEU / perplexity metrics.
"""

from .corpus import Document, GenderLabel, Split, StyleState
from .embeddings import EmbeddingStore, Suggestion, cosine
from .ngrams import NGramTable, add_boundaries, build_table
from .tagging import LexiconTagger, PosTag, TagScope
from .transfer import (
    Beam,
    Candidate,
    SuggestionGrid,
    TransferConfig,
    beam_score,
    beam_search,
    transfer_document,
)

__version__ = "0.1.0"

__all__ = [
    "Beam",
    "Candidate",
    "Document",
    "EmbeddingStore",
    "GenderLabel",
    "LexiconTagger",
    "NGramTable",
    "PosTag",
    "Split",
    "StyleState",
    "Suggestion",
    "SuggestionGrid",
    "TagScope",
    "TransferConfig",
    "add_boundaries",
    "beam_score",
    "beam_search",
    "build_table",
    "cosine",
    "transfer_document",
    "__version__",
]
