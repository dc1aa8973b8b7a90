"""Span-level correction scoring: P, R and F-beta over exact edit matches.

Edits match on (start, end, replacement) only; error-type tags are ignored.
Multi-reference sentences are scored against the friendliest reference and
corpus results micro-average the counts before deriving the rates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .edits import EditSet
from .errors import ConfigError


def f_beta(precision: float, recall: float, beta: float = 0.5) -> float:
    """(1 + b^2) P R / (b^2 P + R), and 0 when the denominator is 0."""
    if not 0.0 <= precision <= 1.0:
        raise ValueError(f"precision out of [0, 1]: {precision}")
    if not 0.0 <= recall <= 1.0:
        raise ValueError(f"recall out of [0, 1]: {recall}")
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    b2 = beta * beta
    denom = b2 * precision + recall
    if denom == 0:
        return 0.0
    return (1 + b2) * precision * recall / denom


class SentenceScore(NamedTuple):
    tp: int
    fp: int
    fn: int
    ref_index: int


def score_sentence(hyp_edits: EditSet, refs: Sequence[EditSet],
                   beta: float = 0.5) -> SentenceScore:
    """Score one sentence against the best of its references.

    The chosen reference maximizes sentence F-beta, with ties broken by
    higher tp, then lower fn, then the lowest reference index. A sentence
    where the hypothesis and the chosen reference are both empty counts
    (0, 0, 0).
    """
    if not refs:
        raise ConfigError("at least one reference edit set is required")
    hyp_keys = hyp_edits.keys()
    best: tuple[float, int, int, int] | None = None
    best_counts: SentenceScore | None = None
    for idx, ref in enumerate(refs):
        ref_keys = ref.keys()
        tp = len(hyp_keys & ref_keys)
        fp = len(hyp_keys) - tp
        fn = len(ref_keys) - tp
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        # Negate so a single tuple comparison prefers high f, high tp, low fn.
        rank = (-f_beta(p, r, beta), -tp, fn, idx)
        if best is None or rank < best:
            best = rank
            best_counts = SentenceScore(tp, fp, fn, idx)
    assert best_counts is not None
    return best_counts


@dataclass(frozen=True)
class ScoreReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f_beta: float
    beta: float

    def as_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": round(self.precision, 6),
            "recall": round(self.recall, 6),
            "f_beta": round(self.f_beta, 6),
            "beta": self.beta,
        }

    def as_json(self) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False)

    def as_table(self) -> str:
        rows = [
            ("tp", str(self.tp)),
            ("fp", str(self.fp)),
            ("fn", str(self.fn)),
            ("precision", f"{self.precision:.4f}"),
            ("recall", f"{self.recall:.4f}"),
            (f"f{self.beta:g}", f"{self.f_beta:.4f}"),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)


def aggregate(per_sentence: Iterable[tuple[int, int, int] | SentenceScore],
              beta: float = 0.5) -> ScoreReport:
    """Micro-average: sum counts over sentences, then derive the rates."""
    tp = fp = fn = 0
    for counts in per_sentence:
        tp += counts[0]
        fp += counts[1]
        fn += counts[2]
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return ScoreReport(tp, fp, fn, precision, recall,
                       f_beta(precision, recall, beta), beta)
