"""Pretrained word-vector store with exact cosine nearest-neighbor queries.

The text format is the usual vector interchange layout: a "V D" header line
followed by V lines of "token v1 ... vD", space-separated, UTF-8.
"""

from dataclasses import dataclass

import numpy as np

from .errors import OOVError, ParseError, ValidationError


@dataclass(frozen=True)
class Suggestion:
    token: str
    similarity: float


def cosine(a, b) -> float:
    """Cosine of the angle between two vectors, clamped into [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine is undefined for a zero vector")
    value = float(np.dot(a, b) / (norm_a * norm_b))
    return max(-1.0, min(1.0, value))


class EmbeddingStore:
    """Fixed-dimension vectors with precomputed norms; immutable after load."""

    def __init__(self, tokens, vectors):
        vectors = np.asarray(vectors, dtype=np.float64)
        tokens = list(tokens)
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ValidationError("need one vector row per token")
        if len(set(tokens)) != len(tokens):
            dupes = sorted({t for t in tokens if tokens.count(t) > 1})
            raise ValidationError(f"duplicate tokens {dupes[:5]!r}")
        norms = np.linalg.norm(vectors, axis=1)
        zero_rows = [tokens[i] for i in np.flatnonzero(norms == 0.0)]
        if zero_rows:
            raise ValidationError(f"zero vectors for tokens {zero_rows[:5]!r}")
        self.dim = int(vectors.shape[1])
        self.vocab = {tok: i for i, tok in enumerate(tokens)}
        self.tokens = np.array(tokens, dtype=object)
        self.vectors = vectors
        self.norms = norms

    def __len__(self):
        return len(self.vocab)

    def __contains__(self, token):
        return token in self.vocab

    def vector(self, token) -> np.ndarray:
        if token not in self.vocab:
            raise OOVError(token)
        return self.vectors[self.vocab[token]]

    def most_similar(self, token, top_n: int = 10) -> list[Suggestion]:
        """The top_n highest-cosine tokens, query excluded.

        Sorted by descending similarity, ties broken lexicographically;
        exact full-vocabulary scan, deterministic across runs.
        """
        if top_n < 1:
            raise ValueError(f"top_n must be >= 1, got {top_n}")
        if token not in self.vocab:
            raise OOVError(token)
        idx = self.vocab[token]
        query = self.vectors[idx]
        sims = (self.vectors @ query) / (self.norms * self.norms[idx])
        np.clip(sims, -1.0, 1.0, out=sims)
        sims[idx] = -np.inf
        order = sorted(range(len(sims)), key=lambda i: (-sims[i], self.tokens[i]))
        return [
            Suggestion(token=str(self.tokens[i]), similarity=float(sims[i]))
            for i in order[: min(top_n, len(sims) - 1)]
        ]


def load_vec_text(path) -> EmbeddingStore:
    """Parse the "V D" header text format into a store."""
    tokens = []
    rows = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError("header must be 'vocab_size dimension'", path, 1)
        try:
            vocab_size, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError("header must hold two integers", path, 1) from None
        if vocab_size < 0 or dim < 1:
            raise ParseError(f"bad header values {vocab_size} {dim}", path, 1)
        for line_no, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) == 1 and parts[0] == "":
                continue
            if len(parts) != dim + 1:
                raise ParseError(
                    f"expected {dim} components, got {len(parts) - 1}", path, line_no
                )
            token = parts[0]
            if token in seen:
                raise ParseError(f"duplicate token {token!r}", path, line_no)
            seen.add(token)
            try:
                rows.append([float(x) for x in parts[1:]])
            except ValueError:
                raise ParseError("non-numeric vector component", path, line_no) from None
            tokens.append(token)
    if len(tokens) != vocab_size:
        raise ParseError(f"header promised {vocab_size} vectors, file has {len(tokens)}", path)
    return EmbeddingStore(tokens, np.array(rows, dtype=np.float64).reshape(len(tokens), dim))


def save_vec_text(store: EmbeddingStore, path):
    from .fileio import atomic_write

    ordered = sorted(store.vocab, key=store.vocab.get)
    with atomic_write(path) as fh:
        fh.write(f"{len(store)} {store.dim}\n")
        for token in ordered:
            comps = " ".join(repr(float(x)) for x in store.vectors[store.vocab[token]])
            fh.write(f"{token} {comps}\n")
