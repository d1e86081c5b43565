from datetime import datetime

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from retailmine.errors import BadTimestamp, MalformedRow
from retailmine.txstore import (Record, TransactionDB, build_sequences, one_hot, parse_csv,
                                to_csv)
from strategies import dbs, records

HEAD = "user_id,transaction_id,item,timestamp\n"


def test_header_only():
    db = parse_csv(HEAD)
    assert len(db.records) == 0 and len(db.baskets) == 0
    assert db.item_universe == ()


def test_single_row():
    db = parse_csv(HEAD + "u1,t1,item_3,2023-01-01T09:15:00\n")
    assert db.baskets["t1"].items == ("item_3",)
    assert db.item_universe == ("item_3",)
    assert db.baskets["t1"].timestamp == datetime(2023, 1, 1, 9, 15)


def test_duplicate_item_in_transaction_collapses():
    db = parse_csv(HEAD + "u1,t1,a,2023-01-01T09:00:00\nu1,t1,a,2023-01-01T09:00:00\n")
    assert len(db.records) == 2
    assert db.baskets["t1"].items == ("a",)


def test_crlf_accepted():
    db = parse_csv(HEAD.replace("\n", "\r\n") + "u1,t1,a,2023-01-01T09:00:00\r\n")
    assert db.baskets["t1"].items == ("a",)


def test_earliest_timestamp_wins():
    db = parse_csv(HEAD + "u1,t1,a,2023-01-01T10:00:00\nu1,t1,b,2023-01-01T09:00:00\n")
    assert db.baskets["t1"].timestamp.hour == 9


@pytest.mark.parametrize("row, line", [
    ("u1,t1,a\n", 2),
    ("u1,t1,a,2023-01-01T09:00:00,extra\n", 2),
])
def test_malformed_row(row, line):
    with pytest.raises(MalformedRow) as e:
        parse_csv(HEAD + row)
    assert e.value.line == line


def test_bad_header():
    with pytest.raises(MalformedRow):
        parse_csv("user,tx,item,ts\n")


@pytest.mark.parametrize("ts", ["2023-13-01T00:00:00", "01/02/2023 10:00", "2023-01-01 09:00:00", ""])
def test_bad_timestamp(ts):
    with pytest.raises(BadTimestamp) as e:
        parse_csv(HEAD + "u1,t1,a,2023-01-01T09:00:00\n" + f"u1,t2,a,{ts}\n")
    assert e.value.line == 3


def test_empty_item_rejected():
    with pytest.raises(MalformedRow):
        parse_csv(HEAD + "u1,t1,,2023-01-01T09:00:00\n")


def test_sequences_sorted_by_time():
    db = parse_csv(HEAD + "u1,t1,a,2023-01-01T09:00:00\nu1,t2,b,2023-01-01T08:00:00\n")
    assert build_sequences(db).sequences == {"u1": (("b",), ("a",))}


def test_sequence_tie_broken_by_transaction_id():
    db = parse_csv(HEAD + "u1,t2,b,2023-01-01T09:00:00\nu1,t1,a,2023-01-01T09:00:00\n")
    assert build_sequences(db).sequences["u1"] == (("a",), ("b",))


def test_sequences_two_users_and_empty():
    assert len(build_sequences(parse_csv(HEAD))) == 0
    db = parse_csv(HEAD + "u1,t1,a,2023-01-01T09:00:00\nu2,t2,b,2023-01-01T09:00:00\n")
    assert build_sequences(db).sequences == {"u1": (("a",),), "u2": (("b",),)}


def test_one_hot_examples():
    db = parse_csv(HEAD + "u,t1,a,2023-01-01T00:00:00\nu,t1,b,2023-01-01T00:00:00\n"
                          "u,t2,b,2023-01-01T00:00:00\n")
    bm = one_hot(db)
    assert bm.items == ("a", "b")
    np.testing.assert_array_equal(bm.matrix, [[1, 1], [0, 1]])
    assert one_hot(parse_csv(HEAD)).matrix.shape == (0, 0)
    full = one_hot(TransactionDB.from_records(
        [Record("u", "t", i, datetime(2023, 1, 1)) for i in "xyz"]))
    assert full.matrix.all()


@given(records())
def test_roundtrip_lossless(recs):
    db = TransactionDB.from_records(recs)
    again = parse_csv(to_csv(db))
    assert again.records == db.records
    assert dict(again.baskets) == dict(db.baskets)


@given(dbs())
def test_basket_invariants(db):
    assert sum(len(b.items) for b in db.baskets.values()) <= len(db.records)
    assert list(db.item_universe) == sorted(set(db.item_universe))
    assert set(db.item_universe) == {i for b in db.baskets.values() for i in b.items}
    assert all(len(b.items) >= 1 for b in db.baskets.values())
    assert sorted({r.transaction_id for r in db.records}) == list(db.baskets)


@given(dbs())
def test_sequence_element_count(db):
    sdb = build_sequences(db)
    pairs = {(r.user_id, r.transaction_id) for r in db.records}
    assert sum(len(s) for s in sdb.sequences.values()) == len(pairs)
    for user, seq in sdb.sequences.items():
        mine = sorted((b.timestamp, b.transaction_id, b.items)
                      for b in db.baskets.values() if b.user_id == user)
        assert [m[2] for m in mine] == list(seq)
        assert all(x[0] <= y[0] for x, y in zip(mine, mine[1:]))


@given(dbs())
def test_one_hot_row_sums(db):
    bm = one_hot(db)
    assert bm.matrix.sum(axis=1).tolist() == [len(db.baskets[t].items) for t in bm.transaction_ids]


@given(records(), st.randoms())
def test_record_order_does_not_change_baskets(recs, rnd):
    shuffled = list(recs)
    rnd.shuffle(shuffled)
    assert dict(TransactionDB.from_records(recs).baskets) == dict(TransactionDB.from_records(shuffled).baskets)
