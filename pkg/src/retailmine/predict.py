"""Next-purchase prediction from association rules and sequential patterns.

A rule ``X -> Y`` is paired with a sequential pattern ``P`` when every item of
``X`` occurs in ``P`` and every item of ``Y`` occurs after the last position
of any ``X`` item. The pair is scored ``confidence * count(P) / n_sequences``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError
from .freqmine import AssociationRule
from .seqmine import SequentialPattern


@dataclass(frozen=True)
class CombinedPattern:
    antecedent: tuple[str, ...]
    consequent: tuple[str, ...]
    rule_confidence: float
    seq_count: int
    score: float


@dataclass(frozen=True)
class Prediction:
    user_id: str
    items: tuple[tuple[str, float], ...]

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "predictions": [{"item": i, "score": s} for i, s in self.items],
        }


def _ordered_after(antecedent, consequent, pattern: Sequence[str]) -> bool:
    last = {}
    for pos, item in enumerate(pattern):
        last[item] = pos
    if any(x not in last for x in antecedent):
        return False
    cut = max(last[x] for x in antecedent)
    return all(last.get(y, -1) > cut for y in consequent)


def combine(rules: Iterable[AssociationRule], patterns: Iterable[SequentialPattern],
            n_sequences: int) -> list[CombinedPattern]:
    rules, patterns = list(rules), list(patterns)
    if not rules or not patterns:
        return []
    if n_sequences < 1:
        raise DomainError("n_sequences must be positive")
    best: dict[tuple, CombinedPattern] = {}
    for rule in rules:
        for pat in patterns:
            if not _ordered_after(rule.antecedent, rule.consequent, pat.elements):
                continue
            score = rule.confidence * (pat.count / n_sequences)
            key = (rule.antecedent, rule.consequent)
            held = best.get(key)
            if held is None or (score, pat.count) > (held.score, held.seq_count):
                best[key] = CombinedPattern(rule.antecedent, rule.consequent,
                                            rule.confidence, pat.count, score)
    return sorted(best.values(), key=lambda c: (-c.score, c.antecedent, c.consequent))


def predict_next(combined: Iterable[CombinedPattern], history: Sequence[str], k: int,
                 user_id: str = "") -> Prediction:
    if k < 1:
        raise DomainError("k must be >= 1")
    owned = set(history)
    scores: dict[str, float] = {}
    for c in combined:
        if not owned.issuperset(c.antecedent):
            continue
        for item in c.consequent:
            if item not in owned and c.score > scores.get(item, -1.0):
                scores[item] = c.score
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return Prediction(user_id, tuple(ranked))
