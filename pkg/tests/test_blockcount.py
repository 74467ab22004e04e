import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anqie.blockcount import (BlockProfile, FactorCounter, count_regular,
                              count_sliding, default_m_max, profile, sat_pow)
from anqie.seqcore import DataError, SymbolicSequence


def seq_of(labels):
    return SymbolicSequence.from_labels(list(labels))


def test_period_two_counts():
    s = seq_of([0, 1] * 5)
    p = profile(s, 3)
    assert [r.b_count for r in p.rows] == [2, 2, 2]
    assert [r.r_count for r in p.rows] == [2, 1, 2]
    assert [r.positions_b for r in p.rows] == [10, 9, 8]
    assert [r.positions_r for r in p.rows] == [10, 5, 3]


def test_single_symbol_sequence():
    s = seq_of([7] * 6)
    p = profile(s, 6)
    assert all(r.b_count == 1 and r.r_count == 1 for r in p.rows)


def test_all_distinct_sequence():
    s = seq_of(range(8))
    p = profile(s, 8)
    assert [r.b_count for r in p.rows] == [8, 7, 6, 5, 4, 3, 2, 1]


def test_m_bounds_rejected():
    s = seq_of([0, 1, 0])
    with pytest.raises(DataError):
        count_sliding(s, 0)
    with pytest.raises(DataError):
        count_sliding(s, 4)
    with pytest.raises(DataError):
        count_regular(s, 4)


def test_default_m_max():
    assert default_m_max(1) == 1
    assert default_m_max(2) == 2
    assert default_m_max(1024) == 14
    assert default_m_max(10**6) == 23


def test_sat_pow_caps():
    assert sat_pow(2, 10) == 1024
    assert sat_pow(2, 200) == 2**62
    assert sat_pow(1, 10**9) == 1


def test_engine_matches_naive_small():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = int(rng.integers(1, 60))
        k = int(rng.integers(1, 5))
        s = seq_of(rng.integers(0, k, size=n).tolist())
        eng = FactorCounter(s)
        b = eng.sliding_counts(n)
        for m in range(1, n + 1):
            assert b[m - 1] == count_sliding(s, m), (n, k, m)
            assert eng.regular_count(m) == count_regular(s, m), (n, k, m)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=80),
       st.data())
def test_engine_matches_naive_property(labels, data):
    s = seq_of(labels)
    m = data.draw(st.integers(1, s.n))
    eng = FactorCounter(s)
    assert eng.sliding_counts(s.n)[m - 1] == count_sliding(s, m)
    assert eng.regular_count(m) == count_regular(s, m)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=60))
def test_count_monotonicity_invariants(labels):
    s = seq_of(labels)
    p = profile(s, s.n)
    b = p.b_counts()
    r = p.r_counts()
    for m in range(1, s.n + 1):
        assert r[m - 1] <= b[m - 1]
        assert b[m - 1] <= min(s.alphabet.size ** m if m < 63 else 2**62,
                               s.n - m + 1)
    # a length-(m+1) block determines its length-m prefix
    for m in range(1, s.n):
        assert b[m] >= b[m - 1] - 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=50),
       st.data())
def test_subadditivity_and_regular_bound(labels, data):
    s = seq_of(labels)
    p = profile(s, s.n)
    b = p.b_counts()
    m = data.draw(st.integers(1, max(1, s.n // 2)))
    k = data.draw(st.integers(1, s.n - m))
    if m + k <= s.n:
        assert b[m + k - 1] <= b[m - 1] * b[k - 1]
    # |B_km| <= m * |R_m|^(k+1)
    km = data.draw(st.integers(1, s.n // m)) * m
    if km <= s.n:
        r_m = int(p.r_counts()[m - 1])
        assert b[km - 1] <= m * sat_pow(r_m, km // m + 1)


def test_profile_row_lookup_and_errors():
    s = seq_of([0, 1, 1, 0])
    p = profile(s, 3)
    assert p.row(2).b_count == 3
    with pytest.raises(DataError):
        p.row(4)


def test_profile_json_round_trip():
    s = seq_of([0, 1, 0, 2, 1, 0])
    p = profile(s, 4)
    d = p.to_json_dict()
    assert d["n"] == 6
    assert [row["m"] for row in d["rows"]] == [1, 2, 3, 4]
    q = BlockProfile.from_json_dict(d)
    assert q == p


def test_profile_csv_shape():
    s = seq_of([0, 1, 0])
    text = profile(s, 2).to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "m,b,r,pos_b,pos_r"
    assert len(lines) == 3


def test_profile_default_m_max_applied():
    s = seq_of([0, 1] * 500)
    p = profile(s)
    assert p.rows[-1].m == default_m_max(1000)


def test_alphabet_larger_than_bytes():
    # symbols above 255 exercise the wide-window fallback in the oracle
    labels = [i % 300 for i in range(64)]
    s = seq_of(labels)
    eng = FactorCounter(s)
    for m in (1, 2, 5, 9):
        assert eng.sliding_counts(9)[m - 1] == count_sliding(s, m)
        assert eng.regular_count(m) == count_regular(s, m)
