import pytest
from hypothesis import given
from hypothesis import strategies as st

from retailmine.errors import DomainError
from retailmine.seqmine import SeqParams, SequentialPattern, prefixspan
from retailmine.txstore import build_sequences, parse_csv
from oracles import brute_sequences, is_subsequence

FOUR = [("a", "b", "c"), ("a", "c"), ("b", "c"), ("a", "b")]


def _pairs(pats):
    return {p.elements: p.count for p in pats}


def test_four_sequence_example():
    got = prefixspan(FOUR, SeqParams(min_count=2))
    assert _pairs(got) == brute_sequences(FOUR, 2)
    assert _pairs(got) == {("a",): 3, ("b",): 3, ("c",): 3,
                           ("a", "b"): 2, ("a", "c"): 2, ("b", "c"): 2}
    assert [p.elements for p in got] == [("a",), ("b",), ("c",), ("a", "b"), ("a", "c"), ("b", "c")]


def test_singleton():
    assert prefixspan([("a",)], SeqParams(min_count=1)) == [SequentialPattern(("a",), 1)]


def test_min_count_above_users():
    assert prefixspan(FOUR, SeqParams(min_count=5)) == []
    assert prefixspan([], SeqParams(min_count=1)) == []


def test_repeated_item_counts_once_per_sequence():
    got = _pairs(prefixspan([("a", "a", "a"), ("a",)], SeqParams(min_count=1)))
    assert got == {("a",): 2, ("a", "a"): 1, ("a", "a", "a"): 1}


def test_max_len():
    got = prefixspan(FOUR, SeqParams(min_count=1, max_len=2))
    assert max(len(p.elements) for p in got) == 2
    assert _pairs(got) == brute_sequences(FOUR, 1, max_len=2)


def test_params_validation():
    with pytest.raises(DomainError):
        SeqParams(min_count=0)


def test_from_sequence_db_flattens_transactions():
    csv = ("user_id,transaction_id,item,timestamp\n"
           "u1,t1,item_18,2023-01-01T09:00:00\n"
           "u1,t1,item_17,2023-01-01T09:00:00\n"
           "u1,t2,item_3,2023-01-02T09:00:00\n"
           "u2,t3,item_17,2023-01-01T09:00:00\n"
           "u2,t4,item_18,2023-01-03T09:00:00\n")
    got = _pairs(prefixspan(build_sequences(parse_csv(csv)), SeqParams(min_count=2)))
    assert got[("item_17", "item_18")] == 2


seq_dbs = st.lists(st.lists(st.sampled_from("abcde"), min_size=1, max_size=6).map(tuple),
                   min_size=0, max_size=8)


@given(seq_dbs, st.integers(1, 4))
def test_matches_oracle(seqs, k):
    assert _pairs(prefixspan(seqs, SeqParams(min_count=k))) == brute_sequences(seqs, k)


@given(seq_dbs, st.integers(1, 3))
def test_prefix_anti_monotone(seqs, k):
    found = _pairs(prefixspan(seqs, SeqParams(min_count=k)))
    for pat, c in found.items():
        assert c <= len(seqs)
        assert c == sum(is_subsequence(pat, s) for s in seqs)
        if len(pat) > 1:
            assert found[pat[:-1]] >= c
