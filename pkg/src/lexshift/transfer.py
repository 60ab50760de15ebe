"""The style-transfer engine.

For each style-representative token position the engine asks the embedding
store for nearest neighbors, keeps only candidates the character-level
classifier assigns to the target gender (stem/agreement filters for verbs),
and always appends the original token as a fallback so no row is empty.
A width-limited beam search then decodes the most fluent combination under
a per-step score combining 1..4-gram evidence with embedding similarity:

    score = (4*f + 3*t + 2*b + u) / (40 * (1 - sim))

where f/t/b/u are max-normalized 4/3/2/1-gram counts of the gram ending at
the candidate. The original/boundary tokens take the clamp ceiling 1 - eps
as their similarity, and every similarity is clamped to at most 1 - eps,
because the denominator is singular at sim = 1.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .corpus import Document, GenderLabel, StyleState
from .embeddings import EmbeddingStore
from .errors import ValidationError
from .fileio import atomic_write
from .ngrams import END_TOKEN, START_TOKEN, NGramTable
from .stemming import SuffixStemmer, english_stemmer
from .tagging import PosTag, TagScope, Tagger, detect_representatives, tag
from .token_classifier import CharTokenModel, classify_token

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TransferConfig:
    tag_scope: TagScope
    top_n: int = 10
    beam_width: int = 5
    similarity_clamp: float = 0.01
    stemmer: SuffixStemmer = field(default_factory=english_stemmer)

    def __post_init__(self):
        if self.top_n < 1:
            raise ValidationError(f"top_n must be >= 1, got {self.top_n}")
        if self.beam_width < 1:
            raise ValidationError(f"beam_width must be >= 1, got {self.beam_width}")
        if not 0.0 < self.similarity_clamp < 1.0:
            raise ValidationError(
                f"similarity_clamp must be in (0, 1), got {self.similarity_clamp}"
            )

    @property
    def similarity_ceiling(self) -> float:
        return 1.0 - self.similarity_clamp


@dataclass(frozen=True)
class Candidate:
    token: str
    similarity: float
    is_original: bool = False

    def __post_init__(self):
        if not 0.0 <= self.similarity <= 1.0:
            raise ValidationError(
                f"candidate similarity must lie in [0, 1], got {self.similarity}"
            )


@dataclass
class SuggestionGrid:
    """One row per token position, wrapped by boundary rows.

    rows[0] is exactly the <START> candidate and rows[-1] exactly <END>;
    rows[1:-1] line up with the document's token positions.
    """

    rows: list

    def __post_init__(self):
        if len(self.rows) < 2:
            raise ValidationError("grid needs at least the two boundary rows")
        for i, row in enumerate(self.rows):
            if not row:
                raise ValidationError(f"grid row {i} is empty")
        if [c.token for c in self.rows[0]] != [START_TOKEN]:
            raise ValidationError("first grid row must be the <START> candidate")
        if [c.token for c in self.rows[-1]] != [END_TOKEN]:
            raise ValidationError("last grid row must be the <END> candidate")


@dataclass(frozen=True)
class Beam:
    path: tuple
    cumulative_score: float


@dataclass(frozen=True)
class Replacement:
    position: int
    original: str
    chosen: str
    similarity: float


class CachedTokenClassifier:
    """Memoizes character-model labels; suggestions repeat heavily across docs."""

    def __init__(self, model: CharTokenModel):
        self.model = model
        self._cache = {}

    def label(self, token: str) -> GenderLabel:
        hit = self._cache.get(token)
        if hit is None:
            hit, _ = classify_token(self.model, token)
            self._cache[token] = hit
        return hit


def beam_score(table: NGramTable, prev_tokens, candidate: Candidate) -> float:
    """Per-step decoder score of a candidate after up to three path tokens.

    Missing higher-order contexts near the sentence start contribute 0.
    """
    sim = candidate.similarity
    if sim >= 1.0:
        raise ValueError("candidate similarity must be clamped below 1")
    prev = tuple(prev_tokens)[-3:]
    token = candidate.token
    unigram = table.normalized_count((token,))
    bigram = table.normalized_count((prev[-1], token)) if len(prev) >= 1 else 0.0
    trigram = table.normalized_count(prev[-2:] + (token,)) if len(prev) >= 2 else 0.0
    fourgram = table.normalized_count(prev[-3:] + (token,)) if len(prev) >= 3 else 0.0
    weighted = 4.0 * fourgram + 3.0 * trigram + 2.0 * bigram + unigram
    return weighted / (40.0 * (1.0 - sim))


def beam_search(grid: SuggestionGrid, table: NGramTable, beam_width: int):
    """Decode the grid, keeping the beam_width best partial paths per step.

    Every beam is expanded with every candidate of the current row, scored
    over the beam's last three tokens, and the global top beam_width survive
    (ties broken lexicographically by path). Returns surviving beams after
    the <END> row, best first.
    """
    if beam_width < 1:
        raise ValueError(f"beam_width must be >= 1, got {beam_width}")
    beams = {(START_TOKEN,): 0.0}
    for row in grid.rows[1:]:
        candidates = {}
        for path, score in beams.items():
            prev = path[-3:]
            for cand in row:
                step = beam_score(table, prev, cand)
                new_path = path + (cand.token,)
                # identical paths always carry identical sums; keep one
                candidates[new_path] = score + step
        survivors = sorted(candidates.items(), key=lambda kv: (-kv[1], kv[0]))
        beams = dict(survivors[:beam_width])
    ordered = sorted(beams.items(), key=lambda kv: (-kv[1], kv[0]))
    return [Beam(path=path, cumulative_score=score) for path, score in ordered]


def _original_candidate(token: str, config: TransferConfig) -> Candidate:
    return Candidate(token=token, similarity=config.similarity_ceiling, is_original=True)


def _clamp(similarity: float, config: TransferConfig) -> float:
    return min(max(similarity, 0.0), config.similarity_ceiling)


def suggest_replacements(
    doc: Document,
    positions,
    store: EmbeddingStore,
    token_model,
    target: GenderLabel,
    config: TransferConfig,
    tags,
) -> SuggestionGrid:
    """Build the decode grid for one document.

    Representative positions get the target-styled subset of the embedding's
    top_n neighbors (verbs additionally lose same-stem candidates and are
    re-inflected to the original's suffix); all other positions keep exactly
    their original token. The original is always appended as a fallback.
    """
    if isinstance(token_model, CharTokenModel):
        token_model = CachedTokenClassifier(token_model)
    rows = [[_original_candidate(START_TOKEN, config)]]
    wanted = set(positions)
    for i, token in enumerate(doc.tokens):
        original = _original_candidate(token, config)
        if i not in wanted:
            rows.append([original])
            continue
        if token not in store:
            logger.info("no embedding for representative token %r; keeping original", token)
            rows.append([original])
            continue
        suggestions = store.most_similar(token, config.top_n)
        kept = [s for s in suggestions if token_model.label(s.token) is target]
        if tags[i] is PosTag.VERB:
            stem, suffix = config.stemmer.split(token)
            kept = [s for s in kept if config.stemmer.stem(s.token) != stem]
            kept = [
                replace(s, token=config.stemmer.reinflect(s.token, suffix)) for s in kept
            ]
        row = []
        seen = {token}
        for s in kept:
            if s.token in seen:
                continue
            seen.add(s.token)
            row.append(Candidate(token=s.token, similarity=_clamp(s.similarity, config)))
        row.append(original)
        rows.append(row)
    rows.append([_original_candidate(END_TOKEN, config)])
    return SuggestionGrid(rows=rows)


def transfer_document_traced(
    doc: Document,
    store: EmbeddingStore,
    token_model,
    table: NGramTable,
    tagger: Tagger,
    target: GenderLabel,
    config: TransferConfig,
):
    """Transfer one document; returns (document, replacement trace).

    The output document keeps the original author label (evaluation needs
    it) and has exactly as many tokens as the input: the engine substitutes,
    never inserts or deletes.
    """
    if doc.style_state is not StyleState.SOURCE:
        raise ValidationError(f"document {doc.id!r} is already transferred")
    if doc.degenerate or not doc.tokens:
        logger.info("skipping degenerate document %r", doc.id)
        return doc, []
    tags = tag(tagger, doc.tokens)
    positions = detect_representatives(tags, config.tag_scope)
    grid = suggest_replacements(doc, positions, store, token_model, target, config, tags)
    beams = beam_search(grid, table, config.beam_width)
    decoded = beams[0].path[1:-1]
    if len(decoded) != len(doc.tokens):
        raise AssertionError(
            f"decoder changed token count for {doc.id!r}: "
            f"{len(doc.tokens)} -> {len(decoded)}"
        )
    trace = []
    for i, (old, new) in enumerate(zip(doc.tokens, decoded)):
        if old == new:
            continue
        chosen = next(c for c in grid.rows[i + 1] if c.token == new)
        trace.append(
            Replacement(position=i, original=old, chosen=new, similarity=chosen.similarity)
        )
    transferred = replace(
        doc,
        tokens=tuple(decoded),
        raw_text=" ".join(decoded),
        style_state=StyleState.TRANSFERRED,
    )
    return transferred, trace


def transfer_document(doc, store, token_model, table, tagger, target, config) -> Document:
    transferred, _ = transfer_document_traced(
        doc, store, token_model, table, tagger, target, config
    )
    return transferred


_WORKER_CONTEXT = None


def _init_worker(context):
    global _WORKER_CONTEXT
    _WORKER_CONTEXT = context


def _transfer_in_worker(job):
    doc, target_value = job
    store, token_model, table, tagger, config = _WORKER_CONTEXT
    return transfer_document_traced(
        doc, store, token_model, table, tagger, GenderLabel(target_value), config
    )


def resolve_target(doc: Document, target) -> GenderLabel:
    """target is a GenderLabel or the string 'opposite'."""
    if target == "opposite":
        return doc.label.opposite
    if isinstance(target, GenderLabel):
        return target
    return GenderLabel(target)


def transfer_corpus(
    docs,
    store: EmbeddingStore,
    token_model: CharTokenModel,
    table: NGramTable,
    tagger: Tagger,
    target,
    config: TransferConfig,
    jobs: int = 1,
):
    """Transfer a document list; output order is input order regardless of jobs."""
    docs = list(docs)
    if jobs <= 1:
        cached = CachedTokenClassifier(token_model)
        return [
            transfer_document_traced(
                doc, store, cached, table, tagger, resolve_target(doc, target), config
            )
            for doc in docs
        ]
    context = (store, token_model, table, tagger, config)
    jobs_args = [(doc, resolve_target(doc, target).value) for doc in docs]
    with ProcessPoolExecutor(
        max_workers=jobs, initializer=_init_worker, initargs=(context,)
    ) as pool:
        return list(pool.map(_transfer_in_worker, jobs_args, chunksize=8))


def write_transferred_jsonl(results, path):
    """Write (document, trace) pairs in the corpus schema plus the trace."""
    with atomic_write(path) as fh:
        for doc, trace in results:
            record = {
                "id": doc.id,
                "text": doc.raw_text,
                "label": doc.label.value,
                "split": doc.split.value,
                "style_state": doc.style_state.value,
                "replacements": [
                    {
                        "position": r.position,
                        "original": r.original,
                        "chosen": r.chosen,
                        "similarity": r.similarity,
                    }
                    for r in trace
                ],
            }
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
