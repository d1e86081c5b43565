"""Transaction-volume histograms by hour of day and day of week."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .txstore import TransactionDB

WEEKDAYS = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")


@dataclass(frozen=True)
class Histogram:
    kind: Literal["hourly", "daily"]
    buckets: tuple[tuple[int | str, int], ...]

    @property
    def counts(self) -> list[int]:
        return [c for _, c in self.buckets]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def to_csv(self) -> str:
        head = "hour,count" if self.kind == "hourly" else "weekday,count"
        return "\n".join([head, *(f"{label},{count}" for label, count in self.buckets)]) + "\n"


def hourly_histogram(db: TransactionDB) -> Histogram:
    counts = [0] * 24
    for b in db.baskets.values():
        counts[b.timestamp.hour] += 1
    return Histogram("hourly", tuple(enumerate(counts)))


def daily_histogram(db: TransactionDB) -> Histogram:
    counts = [0] * 7
    for b in db.baskets.values():
        counts[b.timestamp.weekday()] += 1
    return Histogram("daily", tuple(zip(WEEKDAYS, counts)))
