"""Seeded synthetic transaction generator.

Randomness comes from numpy's ``PCG64`` bit generator (O'Neill's permuted
congruential generator, 128-bit state) wrapped in ``numpy.random.Generator``.
For each transaction, in id order, the generator draws:

1. user index, uniform on ``[1, n_users]``
2. basket size, uniform on ``[min_basket, max_basket]``
3. the basket's items, ``Generator.choice(n_items, size, replace=False)``
4. timestamp offset in whole seconds, uniform on ``[0, end - start]``

Records within a transaction are written in ascending item-number order.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np

from .errors import InvalidConfig
from .txstore import Record, TransactionDB

DEFAULT_SEED = 42
DEFAULT_YEAR = 2023


@dataclass(frozen=True)
class GenConfig:
    n_users: int = 50
    n_transactions: int = 1000
    n_items: int = 20
    min_basket: int = 1
    max_basket: int = 5
    start: datetime = datetime(DEFAULT_YEAR, 1, 1, 0, 0, 0)
    end: datetime = datetime(DEFAULT_YEAR, 12, 31, 23, 59, 59)
    seed: int = DEFAULT_SEED

    @classmethod
    def for_year(cls, year: int, **kwargs) -> "GenConfig":
        return cls(start=datetime(year, 1, 1), end=datetime(year, 12, 31, 23, 59, 59), **kwargs)

    def validate(self):
        for name in ("n_users", "n_transactions", "n_items", "min_basket", "max_basket"):
            if getattr(self, name) < 1:
                raise InvalidConfig(f"{name} must be positive")
        if not self.min_basket <= self.max_basket <= self.n_items:
            raise InvalidConfig("need 1 <= min_basket <= max_basket <= n_items")
        if not self.start < self.end:
            raise InvalidConfig("start must precede end")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must be a 64-bit unsigned integer")


def user_name(i: int, n_users: int) -> str:
    return f"user_{i:0{max(2, len(str(n_users)))}d}"


def transaction_name(i: int, n_transactions: int) -> str:
    return f"t{i:0{max(4, len(str(n_transactions)))}d}"


def item_name(i: int) -> str:
    return f"item_{i}"


def generate(cfg: GenConfig = GenConfig()) -> TransactionDB:
    cfg.validate()
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    span = int((cfg.end - cfg.start).total_seconds())
    start = cfg.start.replace(microsecond=0)

    records = []
    for t in range(1, cfg.n_transactions + 1):
        user = int(rng.integers(1, cfg.n_users, endpoint=True))
        size = int(rng.integers(cfg.min_basket, cfg.max_basket, endpoint=True))
        picks = sorted(int(i) + 1 for i in rng.choice(cfg.n_items, size=size, replace=False))
        stamp = start + timedelta(seconds=int(rng.integers(0, span, endpoint=True)))
        uid = user_name(user, cfg.n_users)
        tid = transaction_name(t, cfg.n_transactions)
        records.extend(Record(uid, tid, item_name(i), stamp) for i in picks)
    return TransactionDB.from_records(records)
