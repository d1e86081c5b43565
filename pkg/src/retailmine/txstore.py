"""Transaction log data model, CSV ingestion and derived views.

A log is a flat list of ``(user_id, transaction_id, item, timestamp)`` rows,
one per purchased item. Baskets group the rows of one transaction under set
semantics (repeated items collapse).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime
from types import MappingProxyType
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import BadTimestamp, MalformedRow

HEADER = ("user_id", "transaction_id", "item", "timestamp")
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%S"


def parse_timestamp(value: str) -> datetime:
    return datetime.strptime(value, TIMESTAMP_FORMAT)


def format_timestamp(ts: datetime) -> str:
    return ts.strftime(TIMESTAMP_FORMAT)


@dataclass(frozen=True)
class Record:
    user_id: str
    transaction_id: str
    item: str
    timestamp: datetime

    def __post_init__(self):
        if not self.item:
            raise ValueError("item must be non-empty")


@dataclass(frozen=True)
class Basket:
    transaction_id: str
    user_id: str
    items: tuple[str, ...]  # sorted, duplicate-free
    timestamp: datetime  # earliest record timestamp


@dataclass(frozen=True)
class TransactionDB:
    records: tuple[Record, ...]
    baskets: Mapping[str, Basket]  # keyed and ordered by transaction_id
    item_universe: tuple[str, ...]

    @classmethod
    def from_records(cls, records: Iterable[Record]) -> "TransactionDB":
        records = tuple(records)
        grouped: dict[str, list[Record]] = {}
        for rec in records:
            grouped.setdefault(rec.transaction_id, []).append(rec)
        baskets = {}
        for tid in sorted(grouped):
            rows = grouped[tid]
            baskets[tid] = Basket(
                transaction_id=tid,
                user_id=rows[0].user_id,
                items=tuple(sorted({r.item for r in rows})),
                timestamp=min(r.timestamp for r in rows),
            )
        universe = tuple(sorted({r.item for r in records}))
        return cls(records, MappingProxyType(baskets), universe)

    def __len__(self):
        return len(self.baskets)

    def basket_sets(self) -> list[frozenset[str]]:
        """Item sets of all baskets, in transaction_id order."""
        return [frozenset(b.items) for b in self.baskets.values()]

    def users(self) -> list[str]:
        return sorted({b.user_id for b in self.baskets.values()})


@dataclass(frozen=True)
class SequenceDB:
    # user_id -> elements ordered by (timestamp, transaction_id); each element
    # is a sorted item tuple
    sequences: Mapping[str, tuple[tuple[str, ...], ...]] = field(default_factory=dict)

    def __len__(self):
        return len(self.sequences)

    def flattened(self) -> dict[str, tuple[str, ...]]:
        """Per-user sequences with each element expanded into its sorted items."""
        return {u: tuple(i for el in seq for i in el) for u, seq in self.sequences.items()}


@dataclass(frozen=True)
class BasketMatrix:
    transaction_ids: tuple[str, ...]
    items: tuple[str, ...]
    matrix: np.ndarray  # bool, shape (len(transaction_ids), len(items))


def parse_csv(source: str | TextIO) -> TransactionDB:
    """Parse the ``user_id,transaction_id,item,timestamp`` CSV layout.

    ``source`` is either the CSV text itself or an open text stream. Both
    ``\\n`` and ``\\r\\n`` line endings are accepted.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRow(1, "missing header") from None
    if tuple(h.strip() for h in header) != HEADER:
        raise MalformedRow(1, f"expected header {','.join(HEADER)}")

    records = []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != 4:
            raise MalformedRow(line, f"expected 4 columns, got {len(row)}")
        user, tid, item, ts = (c.strip() for c in row)
        if not item:
            raise MalformedRow(line, "empty item")
        try:
            stamp = parse_timestamp(ts)
        except ValueError:
            raise BadTimestamp(line, ts) from None
        records.append(Record(user, tid, item, stamp))
    return TransactionDB.from_records(records)


def read_csv(path) -> TransactionDB:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_csv(fh)


def to_csv(db: TransactionDB) -> str:
    """Serialize the records view back to CSV text (``\\n`` terminated)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for r in db.records:
        writer.writerow((r.user_id, r.transaction_id, r.item, format_timestamp(r.timestamp)))
    return out.getvalue()


def build_sequences(db: TransactionDB) -> SequenceDB:
    per_user: dict[str, list[Basket]] = {}
    for b in db.baskets.values():
        per_user.setdefault(b.user_id, []).append(b)
    sequences = {}
    for user in sorted(per_user):
        ordered = sorted(per_user[user], key=lambda b: (b.timestamp, b.transaction_id))
        sequences[user] = tuple(b.items for b in ordered)
    return SequenceDB(MappingProxyType(sequences))


def one_hot(db: TransactionDB) -> BasketMatrix:
    tids = tuple(db.baskets)
    col = {item: j for j, item in enumerate(db.item_universe)}
    mat = np.zeros((len(tids), len(col)), dtype=bool)
    for i, b in enumerate(db.baskets.values()):
        mat[i, [col[it] for it in b.items]] = True
    return BasketMatrix(tids, db.item_universe, mat)
