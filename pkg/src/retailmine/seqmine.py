"""PrefixSpan over per-user purchase sequences.

Each transaction is expanded into its sorted items, so a pattern is an
ordered list of single items. Support is the number of user sequences that
contain the pattern as a subsequence (a sequence counts once).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DomainError
from .txstore import SequenceDB


@dataclass(frozen=True)
class SeqParams:
    min_count: int = 10
    max_len: int | None = None

    def __post_init__(self):
        if self.min_count < 1:
            raise DomainError("min_count must be >= 1")
        if self.max_len is not None and self.max_len < 1:
            raise DomainError("max_len must be positive")


@dataclass(frozen=True)
class SequentialPattern:
    elements: tuple[str, ...]
    count: int

    def to_dict(self) -> dict:
        return {"pattern": list(self.elements), "count": self.count}


def _sequences(sdb) -> list[tuple[str, ...]]:
    if isinstance(sdb, SequenceDB):
        return list(sdb.flattened().values())
    if isinstance(sdb, Mapping):
        return [tuple(s) for s in sdb.values()]
    return [tuple(s) for s in sdb]


def prefixspan(sdb: SequenceDB | Sequence[Sequence[str]], p: SeqParams = SeqParams()) -> list[SequentialPattern]:
    """Mine all patterns with support >= ``p.min_count``.

    ``sdb`` may also be a plain list of item sequences (already flattened).
    """
    seqs = _sequences(sdb)
    out: list[SequentialPattern] = []
    # projected database: (sequence index, start offset of the suffix)
    _span(seqs, (), [(i, 0) for i in range(len(seqs))], p, out)
    out.sort(key=lambda s: (len(s.elements), s.elements))
    return out


def _span(seqs, prefix, projected, p, out):
    if p.max_len is not None and len(prefix) >= p.max_len:
        return
    # first occurrence of each item within each suffix
    first: dict[str, list[tuple[int, int]]] = {}
    for sid, start in projected:
        seen = set()
        seq = seqs[sid]
        for pos in range(start, len(seq)):
            item = seq[pos]
            if item not in seen:
                seen.add(item)
                first.setdefault(item, []).append((sid, pos + 1))
    for item in sorted(first):
        proj = first[item]
        if len(proj) < p.min_count:
            continue
        pattern = prefix + (item,)
        out.append(SequentialPattern(pattern, len(proj)))
        _span(seqs, pattern, proj, p, out)
