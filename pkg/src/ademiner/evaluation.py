"""Evaluation: classification scores and argument-level extraction scores.

Argument extraction is scored two ways. Exact match treats a predicted
argument as correct only when an unmatched gold argument with the identical
(role, span text) exists in the same sentence, matched greedily in gold
order. Token F1 pairs gold and predicted spans of the same role within a
sentence greedily by descending token overlap (lowercased whitespace
tokens), credits the overlap as true positives, and counts leftover tokens
as false positives or negatives. Both are micro-averaged, overall and split
into main-argument and sub-argument scopes, with per-role tallies available.

Scores are fractions in [0, 1]; rendering multiplies by 100 and rounds to
two decimals.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .extraction.schema import MAIN_ROLES, PharmaEvent, ROLE_ORDER


class EvalError(ValueError):
    pass


@dataclass
class Tally:
    tp: float = 0.0
    fp: float = 0.0
    fn: float = 0.0

    def add(self, other: "Tally") -> None:
        self.tp += other.tp
        self.fp += other.fp
        self.fn += other.fn

    @property
    def precision(self) -> float:
        denom = self.tp + self.fp
        return self.tp / denom if denom else 0.0

    @property
    def recall(self) -> float:
        denom = self.tp + self.fn
        return self.tp / denom if denom else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass
class ClassificationResult:
    precision: float
    recall: float
    f1: float
    accuracy: float
    tp: int
    fp: int
    fn: int
    tn: int
    no_predicted_positives: bool = False


def classification_metrics(
    gold: Sequence[bool], pred: Sequence[bool]
) -> ClassificationResult:
    """Confusion-matrix scores with ADE (True) as the positive class.
    Precision is defined as 0 (and flagged) when nothing was predicted
    positive."""
    if len(gold) != len(pred):
        raise EvalError("gold and pred must have equal length")
    if not gold:
        raise EvalError("empty label lists")
    tp = sum(1 for g, p in zip(gold, pred) if g and p)
    fp = sum(1 for g, p in zip(gold, pred) if not g and p)
    fn = sum(1 for g, p in zip(gold, pred) if g and not p)
    tn = sum(1 for g, p in zip(gold, pred) if not g and not p)
    tally = Tally(tp, fp, fn)
    return ClassificationResult(
        precision=tally.precision,
        recall=tally.recall,
        f1=tally.f1,
        accuracy=(tp + tn) / len(gold),
        tp=tp, fp=fp, fn=fn, tn=tn,
        no_predicted_positives=(tp + fp) == 0,
    )


# ---------------------------------------------------------------------------
# Argument-level scores

SentenceEvents = Sequence[PharmaEvent]


def _role_spans(events: SentenceEvents) -> dict[str, list[str]]:
    """Pool span texts per role across a sentence's events, in order."""
    out: dict[str, list[str]] = {}
    for event in events:
        for role, spans in event.args.items():
            if role not in ROLE_ORDER:
                raise EvalError(f"unknown role {role!r}")
            out.setdefault(role, []).extend(s.text for s in spans)
    return out


def _scope(role: str) -> str:
    return "main" if role in MAIN_ROLES else "sub"


@dataclass
class ExtractionScores:
    overall: Tally = field(default_factory=Tally)
    main: Tally = field(default_factory=Tally)
    sub: Tally = field(default_factory=Tally)
    per_role: dict[str, Tally] = field(default_factory=dict)

    def _add(self, role: str, tally: Tally) -> None:
        self.overall.add(tally)
        (self.main if _scope(role) == "main" else self.sub).add(tally)
        self.per_role.setdefault(role, Tally()).add(tally)


def em_f1(
    gold: Sequence[SentenceEvents], pred: Sequence[SentenceEvents]
) -> ExtractionScores:
    """Exact-match argument scores; greedy matching in gold order equals
    multiset intersection on (role, span text) within each sentence."""
    if len(gold) != len(pred):
        raise EvalError("gold and pred must have equal length")
    scores = ExtractionScores()
    for gold_events, pred_events in zip(gold, pred):
        g, p = _role_spans(gold_events), _role_spans(pred_events)
        for role in set(g) | set(p):
            g_counts = Counter(g.get(role, ()))
            p_counts = Counter(p.get(role, ()))
            tp = sum((g_counts & p_counts).values())
            scores._add(
                role,
                Tally(
                    tp=tp,
                    fp=sum(p_counts.values()) - tp,
                    fn=sum(g_counts.values()) - tp,
                ),
            )
    return scores


def _tokens(span: str) -> list[str]:
    return span.lower().split()


def _overlap(a: Sequence[str], b: Sequence[str]) -> int:
    return sum((Counter(a) & Counter(b)).values())


def token_f1(
    gold: Sequence[SentenceEvents], pred: Sequence[SentenceEvents]
) -> ExtractionScores:
    """Token-overlap argument scores with greedy span pairing.

    Candidate (gold, pred) pairs within a (sentence, role) are taken in
    descending overlap order, ties broken by gold then pred position; only
    pairs with positive overlap pair up. Overlap counts as TP; every other
    predicted token is FP and every other gold token FN.
    """
    if len(gold) != len(pred):
        raise EvalError("gold and pred must have equal length")
    scores = ExtractionScores()
    for gold_events, pred_events in zip(gold, pred):
        g, p = _role_spans(gold_events), _role_spans(pred_events)
        for role in set(g) | set(p):
            g_tokens = [_tokens(s) for s in g.get(role, ())]
            p_tokens = [_tokens(s) for s in p.get(role, ())]
            candidates = sorted(
                (
                    (-_overlap(gt, pt), gi, pi)
                    for gi, gt in enumerate(g_tokens)
                    for pi, pt in enumerate(p_tokens)
                ),
            )
            used_g: set[int] = set()
            used_p: set[int] = set()
            tp = 0
            for neg_overlap, gi, pi in candidates:
                if neg_overlap == 0:
                    break
                if gi in used_g or pi in used_p:
                    continue
                used_g.add(gi)
                used_p.add(pi)
                tp += -neg_overlap
            total_g = sum(len(t) for t in g_tokens)
            total_p = sum(len(t) for t in p_tokens)
            scores._add(role, Tally(tp=tp, fp=total_p - tp, fn=total_g - tp))
    return scores


# ---------------------------------------------------------------------------
# Dataset splitting


def split_dataset(
    items: Sequence, ratios: tuple[float, float, float], seed: int
) -> tuple[list, list, list]:
    """Deterministic seeded shuffle, then contiguous cuts at floor(n*ratio)
    sizes with the remainder going to train."""
    if not items:
        raise EvalError("cannot split an empty dataset")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise EvalError(f"ratios must sum to 1, got {sum(ratios)}")
    shuffled = list(items)
    random.Random(seed).shuffle(shuffled)
    n = len(shuffled)
    n_train, n_valid, n_test = (int(n * r) for r in ratios)
    n_train += n - (n_train + n_valid + n_test)
    return (
        shuffled[:n_train],
        shuffled[n_train : n_train + n_valid],
        shuffled[n_train + n_valid :],
    )


# ---------------------------------------------------------------------------
# Report rendering


def pct(x: float) -> float:
    return round(100.0 * x, 2)


def report_dict(
    em: ExtractionScores,
    token: ExtractionScores,
    classification: ClassificationResult | None = None,
    per_role: bool = False,
) -> dict:
    """Flatten scores into the report object the eval CLI emits."""
    out: dict = {}
    if classification is not None:
        out.update(
            classification_precision=pct(classification.precision),
            classification_recall=pct(classification.recall),
            classification_f1=pct(classification.f1),
            classification_accuracy=pct(classification.accuracy),
        )
    for scope in ("overall", "main", "sub"):
        out[f"{scope}_em_f1"] = pct(getattr(em, scope).f1)
        out[f"{scope}_token_f1"] = pct(getattr(token, scope).f1)
    if per_role:
        roles = sorted(set(em.per_role) | set(token.per_role), key=ROLE_ORDER.get)
        for role in roles:
            out[f"role.{role}.em_f1"] = pct(em.per_role.get(role, Tally()).f1)
            out[f"role.{role}.token_f1"] = pct(token.per_role.get(role, Tally()).f1)
    return out


def report_table(report: dict) -> str:
    """Aligned two-column text table of a flat report dict."""
    width = max(len(k) for k in report)
    lines = [f"{k.ljust(width)}  {v:>7.2f}" for k, v in report.items()]
    return "\n".join(lines)
