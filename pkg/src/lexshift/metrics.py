"""Evaluation bench: contingency sets, trade-off, paired t-test,
three-annotator kappa, BLEU, and the machine-readable report.

The central protocol: predict the source test set, split it into the
correctly and incorrectly predicted subsets, transfer everything, and
re-predict. f counts documents that flipped from correct to incorrect
(the transfer fooled the classifier), h counts the opposite flips, and

    trade_off = (f - h) / n * 100

summarizes the net effect; higher is a stronger transfer.
"""

import json
import math
from collections import Counter
from dataclasses import dataclass

from .corpus import GenderLabel
from .errors import DegenerateVarianceError, ParseError, ValidationError


# ---------------------------------------------------------------------------
# Contingency sets and trade-off
# ---------------------------------------------------------------------------


@dataclass
class ContingencySets:
    """Prediction outcomes on the source test set and its transferred image.

    right_ids/wrong_ids partition all_ids by source-side correctness; f and
    h count correct->incorrect and incorrect->correct flips after transfer.
    """

    all_ids: tuple
    right_ids: frozenset
    wrong_ids: frozenset
    f: int
    h: int
    source_correct: dict
    transferred_correct: dict
    labels: dict

    def __post_init__(self):
        ids = set(self.all_ids)
        if self.right_ids | self.wrong_ids != ids or self.right_ids & self.wrong_ids:
            raise ValidationError("right/wrong sets must partition the document ids")
        if self.f > len(self.right_ids) or self.h > len(self.wrong_ids):
            raise ValidationError("flip counts exceed their subset sizes")

    @property
    def n(self):
        return len(self.all_ids)


def build_contingency(model, source_docs, transferred_docs) -> ContingencySets:
    """Classify both corpora and count the correct/incorrect flips."""
    from .doc_classifier import predict

    source_docs = list(source_docs)
    transferred_docs = list(transferred_docs)
    src_ids = [d.id for d in source_docs]
    tr_ids = [d.id for d in transferred_docs]
    if src_ids != tr_ids:
        raise ValidationError("source and transferred corpora are not id-aligned")
    for s, t in zip(source_docs, transferred_docs):
        if s.label is not t.label:
            raise ValidationError(f"label not preserved for document {s.id!r}")
    source_correct = {}
    transferred_correct = {}
    labels = {}
    for doc in source_docs:
        predicted, _ = predict(model, doc)
        source_correct[doc.id] = predicted is doc.label
        labels[doc.id] = doc.label
    for doc in transferred_docs:
        predicted, _ = predict(model, doc)
        transferred_correct[doc.id] = predicted is doc.label
    right = frozenset(i for i in src_ids if source_correct[i])
    wrong = frozenset(i for i in src_ids if not source_correct[i])
    f = sum(1 for i in right if not transferred_correct[i])
    h = sum(1 for i in wrong if transferred_correct[i])
    return ContingencySets(
        all_ids=tuple(src_ids),
        right_ids=right,
        wrong_ids=wrong,
        f=f,
        h=h,
        source_correct=source_correct,
        transferred_correct=transferred_correct,
        labels=labels,
    )


def trade_off(f: int, h: int, n: int) -> float:
    """(f - h) / n * 100; positive when the transfer fools the classifier."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if f > n or h > n or f < 0 or h < 0:
        raise ValueError(f"flip counts must lie in [0, n]; got f={f}, h={h}, n={n}")
    return (f - h) / n * 100.0


# ---------------------------------------------------------------------------
# Paired t-test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairedSample:
    before: float
    after: float

    @property
    def difference(self):
        return self.after - self.before


@dataclass(frozen=True)
class TTestResult:
    t: float
    p_two_sided: float
    df: int


def _beta_continued_fraction(a, b, x):
    # Lentz's method for the incomplete beta continued fraction.
    max_iterations = 300
    eps = 3e-16
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iterations + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) via the continued fraction, symmetric form for stability."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_p_two_sided(t: float, df: int) -> float:
    """P(|T_df| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2)."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def paired_t_test(pairs, mu0: float = 0.0) -> TTestResult:
    """Dependent-samples t statistic over after-before differences.

    t = (mean(d) - mu0) / (s_d / sqrt(n)) with the n-1 sample standard
    deviation; two-sided p from Student's t with n-1 degrees of freedom.
    """
    diffs = [p.difference for p in pairs]
    n = len(diffs)
    if n < 2:
        raise ValidationError(f"need at least 2 pairs, got {n}")
    if not all(math.isfinite(d) for d in diffs):
        raise ValidationError("differences must be finite")
    mean = sum(diffs) / n
    variance = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if variance == 0.0:
        raise DegenerateVarianceError("all paired differences are identical")
    t = (mean - mu0) / math.sqrt(variance / n)
    return TTestResult(t=t, p_two_sided=student_t_p_two_sided(t, n - 1), df=n - 1)


# ---------------------------------------------------------------------------
# Three-annotator kappa
# ---------------------------------------------------------------------------

FACETS = ("fluency", "semantic", "adulteration")

ANNOTATOR_IDS = (1, 2, 3)


@dataclass(frozen=True)
class AnnotationRecord:
    doc_id: str
    annotator: int
    fluency: int
    semantic: int
    adulteration: int

    def __post_init__(self):
        if self.annotator not in ANNOTATOR_IDS:
            raise ValidationError(f"annotator must be 1, 2, or 3; got {self.annotator}")
        for facet in FACETS:
            if getattr(self, facet) not in (0, 1):
                raise ValidationError(f"{facet} must be 0 or 1")


def load_annotations(path) -> list:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed JSON ({exc.msg})", path, line_no) from None
            try:
                records.append(
                    AnnotationRecord(
                        doc_id=raw["doc_id"],
                        annotator=raw["annotator"],
                        fluency=raw["fluency"],
                        semantic=raw["semantic"],
                        adulteration=raw["adulteration"],
                    )
                )
            except KeyError as exc:
                raise ParseError(f"missing field {exc}", path, line_no) from None
            except ValidationError as exc:
                raise ParseError(str(exc), path, line_no) from None
    return records


def kappa(records, facet: str) -> float:
    """Chance-corrected agreement of three annotators on one binary facet.

    With R_i/I_i annotator i's accept/reject counts over N documents:
    P(A) = fraction of unanimous documents, P(E) = prod(R_i/N) + prod(I_i/N),
    K = (P(A) - P(E)) / (1 - P(E)).
    """
    if facet not in FACETS:
        raise ValidationError(f"facet must be one of {FACETS}, got {facet!r}")
    by_doc = {}
    for rec in records:
        slot = by_doc.setdefault(rec.doc_id, {})
        if rec.annotator in slot:
            raise ValidationError(
                f"duplicate annotation by annotator {rec.annotator} on {rec.doc_id!r}"
            )
        slot[rec.annotator] = getattr(rec, facet)
    if not by_doc:
        raise ValidationError("no annotation records")
    for doc_id, votes in by_doc.items():
        if sorted(votes) != list(ANNOTATOR_IDS):
            raise ValidationError(f"document {doc_id!r} lacks annotations from all three")
    n_docs = len(by_doc)
    accepts = {a: 0 for a in ANNOTATOR_IDS}
    unanimous = 0
    for votes in by_doc.values():
        values = [votes[a] for a in ANNOTATOR_IDS]
        for a in ANNOTATOR_IDS:
            accepts[a] += votes[a]
        if len(set(values)) == 1:
            unanimous += 1
    accept_product = accepts[1] * accepts[2] * accepts[3]
    reject_product = (n_docs - accepts[1]) * (n_docs - accepts[2]) * (n_docs - accepts[3])
    if accept_product + reject_product == n_docs**3:
        raise DegenerateVarianceError(
            "kappa undefined: every annotator gave the same constant answer"
        )
    p_agree = unanimous / n_docs
    p_chance = (accept_product + reject_product) / n_docs**3
    return (p_agree - p_chance) / (1.0 - p_chance)


# ---------------------------------------------------------------------------
# BLEU
# ---------------------------------------------------------------------------

_BLEU_SMOOTH = 1e-9


def _ngram_counts(tokens, order):
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def bleu(reference, hypothesis) -> float:
    """Sentence BLEU in [0, 100]: clipped n-gram precision up to order 4
    (truncated for shorter inputs), uniform weights, brevity penalty, and
    add-epsilon smoothing when an order has zero matches.
    """
    reference = list(reference)
    hypothesis = list(hypothesis)
    if not reference or not hypothesis:
        raise ValidationError("BLEU needs non-empty token lists")
    max_order = min(4, len(reference), len(hypothesis))
    log_precision = 0.0
    for order in range(1, max_order + 1):
        hyp_counts = _ngram_counts(hypothesis, order)
        ref_counts = _ngram_counts(reference, order)
        total = sum(hyp_counts.values())
        matches = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
        smoothed = matches if matches > 0 else _BLEU_SMOOTH
        log_precision += math.log(smoothed / total)
    log_precision /= max_order
    hyp_len, ref_len = len(hypothesis), len(reference)
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_precision)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


def _breakdown(ids, correct_map, labels, label=None):
    chosen = [i for i in ids if label is None or labels[i] is label]
    correct = sum(1 for i in chosen if correct_map[i])
    return {
        "correct": correct,
        "incorrect": len(chosen) - correct,
        "accuracy": correct / len(chosen) if chosen else None,
    }


def build_report(
    sets: ContingencySets,
    bleu_mean: float | None = None,
    perplexity_mean: float | None = None,
    seed: int | None = None,
) -> dict:
    """Stable-keyed evaluation record (see README for the key inventory)."""
    ids = sets.all_ids

    def side(correct_map):
        return {
            "all": _breakdown(ids, correct_map, sets.labels),
            "male": _breakdown(ids, correct_map, sets.labels, GenderLabel.MALE),
            "female": _breakdown(ids, correct_map, sets.labels, GenderLabel.FEMALE),
        }

    right, wrong = sets.right_ids, sets.wrong_ids
    subsets = {
        "source_right": _breakdown(right, sets.source_correct, sets.labels),
        "source_wrong": _breakdown(wrong, sets.source_correct, sets.labels),
        "transferred_right": _breakdown(right, sets.transferred_correct, sets.labels),
        "transferred_wrong": _breakdown(wrong, sets.transferred_correct, sets.labels),
    }
    return {
        "n": sets.n,
        "f": sets.f,
        "h": sets.h,
        "trade_off": trade_off(sets.f, sets.h, sets.n),
        "source": side(sets.source_correct),
        "transferred": side(sets.transferred_correct),
        "subsets": subsets,
        "bleu_mean": bleu_mean,
        "perplexity_mean": perplexity_mean,
        "seed": seed,
    }
