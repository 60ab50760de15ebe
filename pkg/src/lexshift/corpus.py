"""Gender-labeled corpus loading, tokenization, preprocessing, and splitting.

The on-disk corpus format is JSONL, one record per line:

    {"id": str, "text": str, "label": "male"|"female", "split": "train"|"dev"|"test"}

Transferred corpora additionally carry "style_state" and "replacements"
(written by the transfer engine); those two extras are accepted on load,
anything else unknown is rejected.
"""

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import ParseError, ValidationError
from .fileio import atomic_write


class GenderLabel(Enum):
    MALE = "male"
    FEMALE = "female"

    @property
    def opposite(self):
        return GenderLabel.FEMALE if self is GenderLabel.MALE else GenderLabel.MALE


class Split(Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


class StyleState(Enum):
    SOURCE = "source"
    TRANSFERRED = "transferred"


@dataclass(frozen=True)
class Document:
    """One labeled text unit; immutable after construction."""

    id: str
    raw_text: str
    tokens: tuple[str, ...]
    label: GenderLabel
    split: Split
    style_state: StyleState = StyleState.SOURCE
    degenerate: bool = False


def _is_punct_char(ch):
    return unicodedata.category(ch).startswith("P")


def _is_punct_token(token):
    return bool(token) and all(_is_punct_char(c) for c in token)


def tokenize(text: str) -> list[str]:
    """Whitespace tokenization with leading/trailing punctuation split off.

    Each boundary punctuation character becomes its own token; interior
    punctuation (hyphens, apostrophes) is left inside the word.
    """
    tokens = []
    for chunk in text.split():
        head = []
        while chunk and _is_punct_char(chunk[0]):
            head.append(chunk[0])
            chunk = chunk[1:]
        tail = []
        while chunk and _is_punct_char(chunk[-1]):
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(head)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


_REQUIRED_FIELDS = ("id", "text", "label", "split")
_OPTIONAL_FIELDS = ("style_state", "replacements")


def _parse_record(record, path, line_no):
    if not isinstance(record, dict):
        raise ParseError("record is not a JSON object", path, line_no)
    for name in _REQUIRED_FIELDS:
        if name not in record:
            raise ParseError(f"missing field {name!r}", path, line_no)
    unknown = set(record) - set(_REQUIRED_FIELDS) - set(_OPTIONAL_FIELDS)
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)!r}", path, line_no)
    if not isinstance(record["id"], str) or not isinstance(record["text"], str):
        raise ParseError("id and text must be strings", path, line_no)
    try:
        label = GenderLabel(record["label"])
    except ValueError:
        raise ParseError(f"unknown label {record['label']!r}", path, line_no) from None
    try:
        split = Split(record["split"])
    except ValueError:
        raise ParseError(f"unknown split {record['split']!r}", path, line_no) from None
    style = StyleState(record.get("style_state", "source"))
    tokens = tuple(tokenize(record["text"]))
    return Document(
        id=record["id"],
        raw_text=record["text"],
        tokens=tokens,
        label=label,
        split=split,
        style_state=style,
        degenerate=not tokens,
    )


def load_jsonl(path) -> list[Document]:
    """Load a corpus file; one Document per line, input order preserved."""
    docs = []
    seen_ids = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed JSON ({exc.msg})", path, line_no) from None
            doc = _parse_record(record, path, line_no)
            if doc.id in seen_ids:
                raise ParseError(f"duplicate document id {doc.id!r}", path, line_no)
            seen_ids.add(doc.id)
            docs.append(doc)
    return docs


def write_jsonl(docs, path):
    """Serialize documents back to the JSONL corpus format."""
    with atomic_write(path) as fh:
        for doc in docs:
            record = {
                "id": doc.id,
                "text": doc.raw_text,
                "label": doc.label.value,
                "split": doc.split.value,
            }
            if doc.style_state is not StyleState.SOURCE:
                record["style_state"] = doc.style_state.value
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def load_stopwords(path) -> set[str]:
    """One token per line, UTF-8; lines starting with '#' are comments."""
    stopwords = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                stopwords.add(word)
    return stopwords


def preprocess(doc: Document, stopwords: set[str]) -> Document:
    """Lowercase, drop punctuation-only tokens, drop stopwords.

    A document reduced to zero tokens is flagged degenerate, never dropped.
    Idempotent for a fixed stopword set.
    """
    kept = []
    for token in doc.tokens:
        token = token.lower()
        if _is_punct_token(token) or token in stopwords:
            continue
        kept.append(token)
    return replace(doc, tokens=tuple(kept), degenerate=not kept)


def split_long_document(doc: Document, max_len: int = 256) -> list[Document]:
    """Cut a document into consecutive subdocuments of at most max_len tokens.

    Concatenating the outputs reproduces the input token sequence exactly.
    A document that already fits is returned unchanged (no id suffix).
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if doc.degenerate or not doc.tokens:
        return []
    if len(doc.tokens) <= max_len:
        return [doc]
    parts = []
    for ordinal, start in enumerate(range(0, len(doc.tokens), max_len)):
        chunk = doc.tokens[start : start + max_len]
        parts.append(
            replace(
                doc,
                id=f"{doc.id}#{ordinal}",
                raw_text=" ".join(chunk),
                tokens=chunk,
            )
        )
    return parts


@dataclass
class CorpusStats:
    """Document counts per (label, split)."""

    counts: Counter = field(default_factory=Counter)

    def count(self, label: GenderLabel, split: Split) -> int:
        return self.counts[(label, split)]

    def total(self, label: GenderLabel) -> int:
        return sum(n for (lab, _), n in self.counts.items() if lab is label)


def corpus_stats(docs) -> CorpusStats:
    stats = CorpusStats()
    for doc in docs:
        stats.counts[(doc.label, doc.split)] += 1
    return stats


def validate_corpus(docs, expect_split: Split | None = None):
    """Shared precondition checks for the training entry points."""
    if not docs:
        raise ValidationError("corpus is empty")
    if expect_split is not None:
        bad = [d.id for d in docs if d.split is not expect_split]
        if bad:
            raise ValidationError(
                f"expected split={expect_split.value} for all documents, "
                f"got others for ids {bad[:5]!r}"
            )
    labels = {d.label for d in docs}
    if len(labels) < 2:
        only = next(iter(labels)).value if labels else "none"
        raise ValidationError(f"corpus contains a single label ({only})")
