"""1-4-gram count table: decoder scoring support and the fluency metric.

Counts come from the training split only. Boundary tags <START>/<END> are
ordinary tokens here; the pipeline wraps every document with them (see
`add_boundaries`) before counting so that sentence-initial and -final
positions are scorable at decode time.

On-disk format is TSV, one line per gram:

    order<TAB>space-joined tokens<TAB>count

sorted by (order, gram) for reproducible diffs.
"""

import math
from dataclasses import dataclass, field

from .corpus import Document, Split
from .errors import ParseError, ValidationError
from .fileio import atomic_write

START_TOKEN = "<START>"
END_TOKEN = "<END>"

MAX_ORDER = 4


def add_boundaries(tokens) -> list[str]:
    return [START_TOKEN, *tokens, END_TOKEN]


@dataclass
class NGramTable:
    counts: dict[int, dict[tuple[str, ...], int]] = field(
        default_factory=lambda: {k: {} for k in range(1, MAX_ORDER + 1)}
    )
    max_count: dict[int, int] = field(
        default_factory=lambda: {k: 0 for k in range(1, MAX_ORDER + 1)}
    )
    total_unigrams: int = 0

    def count(self, gram: tuple[str, ...]) -> int:
        order = len(gram)
        if not 1 <= order <= MAX_ORDER:
            raise ValueError(f"gram order must be 1..{MAX_ORDER}, got {order}")
        return self.counts[order].get(gram, 0)

    def normalized_count(self, gram: tuple[str, ...]) -> float:
        """Count divided by the per-order maximum; 0 for unseen grams."""
        order = len(gram)
        if not 1 <= order <= MAX_ORDER:
            raise ValueError(f"gram order must be 1..{MAX_ORDER}, got {order}")
        peak = self.max_count[order]
        if peak == 0:
            return 0.0
        return self.counts[order].get(gram, 0) / peak

    @property
    def vocabulary(self) -> set[str]:
        return {gram[0] for gram in self.counts[1]}

    def perplexity(self, doc: Document) -> float:
        """Longest-match backoff perplexity of a document.

        Each token is scored at the longest order whose full n-gram ending at
        the token was observed (relative frequency against its context, the
        empty context counting total unigrams); a token with no match at any
        order falls back to an add-one-smoothed unigram estimate whose event
        space is the table vocabulary extended with the document's own tokens.
        """
        if doc.degenerate or not doc.tokens:
            raise ValidationError(f"cannot score degenerate document {doc.id!r}")
        tokens = list(doc.tokens)
        vocab_size = len(self.vocabulary | set(tokens))
        log_prob = 0.0
        for i, token in enumerate(tokens):
            prob = None
            for order in range(min(MAX_ORDER, i + 1), 1, -1):
                gram = tuple(tokens[i - order + 1 : i + 1])
                seen = self.counts[order].get(gram, 0)
                if seen > 0:
                    context = self.counts[order - 1][gram[:-1]]
                    prob = seen / context
                    break
            if prob is None:
                unigram = self.counts[1].get((token,), 0)
                if unigram > 0:
                    prob = unigram / self.total_unigrams
                else:
                    prob = 1.0 / (self.total_unigrams + vocab_size)
            log_prob += math.log(prob)
        return math.exp(-log_prob / len(tokens))


def build_table(train_docs) -> NGramTable:
    """Count every contiguous 1..4-gram across the training documents."""
    docs = list(train_docs)
    if not docs:
        raise ValidationError("cannot build an n-gram table from an empty corpus")
    bad = [d.id for d in docs if d.split is not Split.TRAIN]
    if bad:
        raise ValidationError(f"n-gram table must be built from the train split; got {bad[:5]!r}")
    table = NGramTable()
    for doc in docs:
        tokens = doc.tokens
        for order in range(1, MAX_ORDER + 1):
            grams = table.counts[order]
            for start in range(len(tokens) - order + 1):
                gram = tuple(tokens[start : start + order])
                grams[gram] = grams.get(gram, 0) + 1
    for order in range(1, MAX_ORDER + 1):
        grams = table.counts[order]
        table.max_count[order] = max(grams.values()) if grams else 0
    table.total_unigrams = sum(table.counts[1].values())
    if table.total_unigrams == 0:
        raise ValidationError("training corpus has no tokens")
    return table


def save_table_tsv(table: NGramTable, path):
    with atomic_write(path) as fh:
        for order in range(1, MAX_ORDER + 1):
            for gram in sorted(table.counts[order]):
                fh.write(f"{order}\t{' '.join(gram)}\t{table.counts[order][gram]}\n")


def load_table_tsv(path) -> NGramTable:
    table = NGramTable()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError("expected 3 tab-separated columns", path, line_no)
            try:
                order = int(parts[0])
                count = int(parts[2])
            except ValueError:
                raise ParseError("order and count must be integers", path, line_no) from None
            if not 1 <= order <= MAX_ORDER:
                raise ParseError(f"order must be 1..{MAX_ORDER}, got {order}", path, line_no)
            gram = tuple(parts[1].split(" "))
            if len(gram) != order:
                raise ParseError(
                    f"gram length {len(gram)} does not match order {order}", path, line_no
                )
            if count < 0:
                raise ParseError("counts must be non-negative", path, line_no)
            if gram in table.counts[order]:
                raise ParseError(f"duplicate gram {gram!r}", path, line_no)
            table.counts[order][gram] = count
    for order in range(1, MAX_ORDER + 1):
        grams = table.counts[order]
        table.max_count[order] = max(grams.values()) if grams else 0
    table.total_unigrams = sum(table.counts[1].values())
    return table
