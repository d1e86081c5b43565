from datetime import datetime

from hypothesis import given
from hypothesis import strategies as st

from retailmine.temporal import WEEKDAYS, daily_histogram, hourly_histogram
from retailmine.txstore import Record, TransactionDB
from strategies import dbs, records


def _db(*stamps):
    return TransactionDB.from_records(
        Record("u", f"t{i}", "a", datetime.fromisoformat(s)) for i, s in enumerate(stamps))


def test_empty():
    empty = TransactionDB.from_records([])
    assert hourly_histogram(empty).counts == [0] * 24
    assert daily_histogram(empty).counts == [0] * 7


def test_hourly_counts():
    h = hourly_histogram(_db("2023-01-01T09:05:00", "2023-01-01T09:59:00", "2023-01-01T21:00:00"))
    expected = [0] * 24
    expected[9], expected[21] = 2, 1
    assert h.counts == expected
    assert [label for label, _ in h.buckets] == list(range(24))


def test_monday():
    d = daily_histogram(_db("2023-01-02T12:00:00"))
    assert dict(d.buckets) == {"Monday": 1, **{w: 0 for w in WEEKDAYS[1:]}}
    assert [label for label, _ in d.buckets] == list(WEEKDAYS)


def test_default_dataset_sums(default_db):
    assert hourly_histogram(default_db).total == 1000
    assert daily_histogram(default_db).total == 1000


def test_csv_shape(default_db):
    text = hourly_histogram(default_db).to_csv().splitlines()
    assert text[0] == "hour,count" and len(text) == 25
    text = daily_histogram(default_db).to_csv().splitlines()
    assert text[0] == "weekday,count" and text[1].startswith("Monday,")


@given(dbs())
def test_conservation(db):
    assert hourly_histogram(db).total == len(db.baskets)
    assert daily_histogram(db).total == len(db.baskets)
    assert len(hourly_histogram(db).buckets) == 24
    assert len(daily_histogram(db).buckets) == 7


@given(records(), st.randoms())
def test_permutation_invariant(recs, rnd):
    shuffled = list(recs)
    rnd.shuffle(shuffled)
    a, b = TransactionDB.from_records(recs), TransactionDB.from_records(shuffled)
    assert hourly_histogram(a) == hourly_histogram(b)
    assert daily_histogram(a) == daily_histogram(b)


@given(records(), records())
def test_additive_over_disjoint_union(r1, r2):
    r2 = [Record(r.user_id, "x" + r.transaction_id, r.item, r.timestamp) for r in r2]
    union = TransactionDB.from_records(r1 + r2)
    h1 = hourly_histogram(TransactionDB.from_records(r1)).counts
    h2 = hourly_histogram(TransactionDB.from_records(r2)).counts
    assert hourly_histogram(union).counts == [a + b for a, b in zip(h1, h2)]
