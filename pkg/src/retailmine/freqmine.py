"""Frequent itemsets (Apriori, FP-Growth) and association rules.

Supports are tracked as integer basket counts. A fractional ``min_support``
becomes the count threshold ``ceil(min_support * n)`` computed on the decimal
value of the fraction, so ``0.1`` of 30 baskets means 3 baskets, not 4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .errors import DomainError, EmptyDatabase, MissingSubsetSupport
from .txstore import TransactionDB

Itemset = tuple[str, ...]


@dataclass(frozen=True)
class MiningParams:
    min_support: float = 0.005
    min_confidence: float = 0.3
    max_len: int | None = None

    def __post_init__(self):
        if not 0 < self.min_support <= 1:
            raise DomainError("min_support must lie in (0, 1]")
        if not 0 < self.min_confidence <= 1:
            raise DomainError("min_confidence must lie in (0, 1]")
        if self.max_len is not None and self.max_len < 1:
            raise DomainError("max_len must be positive")


@dataclass(frozen=True)
class FrequentItemset:
    items: Itemset
    count: int
    support: float


class RuleMetrics(NamedTuple):
    confidence: float
    lift: float
    leverage: float
    conviction: float
    zhangs_metric: float


@dataclass(frozen=True)
class AssociationRule:
    antecedent: Itemset
    consequent: Itemset
    support: float
    confidence: float
    lift: float
    leverage: float
    conviction: float
    zhangs_metric: float

    def to_dict(self) -> dict:
        return {
            "antecedent": list(self.antecedent),
            "consequent": list(self.consequent),
            "support": self.support,
            "confidence": self.confidence,
            "lift": self.lift,
            "leverage": self.leverage,
            "conviction": "inf" if math.isinf(self.conviction) else self.conviction,
            "zhangs_metric": self.zhangs_metric,
        }


def exact_fraction(x: float) -> Fraction:
    """The decimal value a user meant when typing ``x`` (``0.1`` -> 1/10)."""
    return Fraction(repr(float(x)))


def min_count(min_support: float, n: int) -> int:
    return max(1, math.ceil(exact_fraction(min_support) * n))


def _as_baskets(db) -> list[frozenset[str]]:
    if isinstance(db, TransactionDB):
        return db.basket_sets()
    return [frozenset(b) for b in db]


def _finish(counts: dict[Itemset, int], n: int) -> list[FrequentItemset]:
    out = [FrequentItemset(items, c, c / n) for items, c in counts.items()]
    out.sort(key=lambda f: (len(f.items), f.items))
    return out


def apriori(db: TransactionDB | Iterable[Iterable[str]], p: MiningParams = MiningParams()) -> list[FrequentItemset]:
    """Level-wise mining; a candidate is counted only if all its subsets are frequent."""
    baskets = _as_baskets(db)
    n = len(baskets)
    if n == 0:
        raise EmptyDatabase("cannot mine an empty database")
    threshold = min_count(p.min_support, n)

    singles: dict[str, int] = {}
    for b in baskets:
        for item in b:
            singles[item] = singles.get(item, 0) + 1
    level = {(i,): c for i, c in singles.items() if c >= threshold}
    result = dict(level)

    k = 2
    while level and (p.max_len is None or k <= p.max_len):
        candidates = _join(sorted(level), level)
        if not candidates:
            break
        counts = dict.fromkeys(candidates, 0)
        for b in baskets:
            if len(b) < k:
                continue
            for cand in candidates:
                if b.issuperset(cand):
                    counts[cand] += 1
        level = {c: v for c, v in counts.items() if v >= threshold}
        result.update(level)
        k += 1
    return _finish(result, n)


def _join(prev: Sequence[Itemset], frequent) -> list[Itemset]:
    # prefix join of sorted (k-1)-itemsets, then prune by downward closure
    out = []
    for i, a in enumerate(prev):
        for b in prev[i + 1:]:
            if a[:-1] != b[:-1]:
                break
            cand = a + (b[-1],)
            if all(cand[:j] + cand[j + 1:] in frequent for j in range(len(cand) - 2)):
                out.append(cand)
    return out


class _FPNode:
    __slots__ = ("item", "count", "parent", "children", "link")

    def __init__(self, item, parent):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children = {}
        self.link = None


class FPTree:
    """Prefix tree of weighted transactions with a header table of node chains."""

    def __init__(self, weighted: Iterable[tuple[Sequence[str], int]], threshold: int):
        weighted = list(weighted)
        counts: dict[str, int] = {}
        for items, w in weighted:
            for it in items:
                counts[it] = counts.get(it, 0) + w
        self.counts = {i: c for i, c in counts.items() if c >= threshold}
        # global order: descending frequency, ties by item name
        self.order = sorted(self.counts, key=lambda i: (-self.counts[i], i))
        rank = {item: r for r, item in enumerate(self.order)}
        self.root = _FPNode(None, None)
        self.heads: dict[str, _FPNode] = {}
        self._tails: dict[str, _FPNode] = {}
        for items, w in weighted:
            path = sorted((i for i in set(items) if i in rank), key=rank.__getitem__)
            self._insert(path, w)

    def _insert(self, path, weight):
        node = self.root
        for item in path:
            child = node.children.get(item)
            if child is None:
                child = node.children[item] = _FPNode(item, node)
                if item in self._tails:
                    self._tails[item].link = child
                else:
                    self.heads[item] = child
                self._tails[item] = child
            child.count += weight
            node = child

    def nodes(self, item):
        node = self.heads.get(item)
        while node is not None:
            yield node
            node = node.link

    def conditional_base(self, item) -> list[tuple[list[str], int]]:
        base = []
        for node in self.nodes(item):
            path = []
            up = node.parent
            while up.item is not None:
                path.append(up.item)
                up = up.parent
            if path:
                base.append((path[::-1], node.count))
        return base


def fpgrowth(db: TransactionDB | Iterable[Iterable[str]], p: MiningParams = MiningParams()) -> list[FrequentItemset]:
    baskets = _as_baskets(db)
    n = len(baskets)
    if n == 0:
        raise EmptyDatabase("cannot mine an empty database")
    threshold = min_count(p.min_support, n)
    result: dict[Itemset, int] = {}
    tree = FPTree(((b, 1) for b in baskets), threshold)
    _mine(tree, (), threshold, p.max_len, result)
    return _finish(result, n)


def _mine(tree: FPTree, suffix: tuple[str, ...], threshold, max_len, out):
    for item in reversed(tree.order):
        pattern = (item,) + suffix
        out[tuple(sorted(pattern))] = tree.counts[item]
        if max_len is not None and len(pattern) >= max_len:
            continue
        cond = FPTree(tree.conditional_base(item), threshold)
        if cond.counts:
            _mine(cond, pattern, threshold, max_len, out)


def rule_metrics(supp_xy: float, supp_x: float, supp_y: float) -> RuleMetrics:
    if not (0 < supp_x <= 1 and 0 < supp_y <= 1):
        raise DomainError("antecedent and consequent supports must lie in (0, 1]")
    if not 0 <= supp_xy <= min(supp_x, supp_y):
        raise DomainError("joint support must lie in [0, min(supp_x, supp_y)]")
    confidence = supp_xy / supp_x
    lift = confidence / supp_y
    leverage = supp_xy - supp_x * supp_y
    conviction = math.inf if confidence >= 1 else (1 - supp_y) / (1 - confidence)
    # leverage == a - b algebraically; dividing a - b keeps |zhang| <= 1 in floats
    a, b = supp_xy * (1 - supp_x), supp_x * (supp_y - supp_xy)
    zhang = (a - b) / max(a, b) if max(a, b) > 0 else 0.0
    return RuleMetrics(confidence, lift, leverage, conviction, zhang)


def gen_rules(freq: Sequence[FrequentItemset], p: MiningParams, n_baskets: int) -> list[AssociationRule]:
    """Emit every rule X -> Z\\X over frequent Z meeting the confidence threshold."""
    counts = {f.items: f.count for f in freq}
    min_conf = exact_fraction(p.min_confidence)
    rules = []
    for z, cz in counts.items():
        if len(z) < 2:
            continue
        for r in range(1, len(z)):
            for x in combinations(z, r):
                y = tuple(i for i in z if i not in x)
                try:
                    cx, cy = counts[x], counts[y]
                except KeyError as e:
                    raise MissingSubsetSupport(f"no support recorded for subset {e.args[0]}") from None
                if Fraction(cz, cx) < min_conf:
                    continue
                m = rule_metrics(cz / n_baskets, cx / n_baskets, cy / n_baskets)
                rules.append(AssociationRule(x, y, cz / n_baskets, *m))
    rules.sort(key=lambda r: (-r.support, -r.confidence, r.antecedent, r.consequent))
    return rules
