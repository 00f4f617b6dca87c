import math

import pytest
from hypothesis import given, settings, strategies as st

from taxosim.errors import ZeroSetSize
from taxosim.scale import apply_scale, scale_denominator


def test_worked_examples():
    assert apply_scale(10.0, 100, 100).scaled == 0.1
    assert apply_scale(4.5, 5, 5).scaled == 0.9
    s = apply_scale(3.0, 4, 4)
    assert (s.raw, s.scaled, s.size_a, s.size_b) == (3.0, 0.75, 4, 4)


def test_ranking_reversal():
    big = apply_scale(10.0, 100, 100).scaled
    small = apply_scale(4.5, 5, 5).scaled
    assert small > big


def test_formula_and_log_bases():
    assert apply_scale(2.0, 3, 10).scaled == 2.0 / (3 + math.log(8))
    assert apply_scale(2.0, 3, 10, "2").scaled == 2.0 / (3 + 3.0)
    assert apply_scale(2.0, 10, 3, "10").scaled == 2.0 / (3 + math.log10(8))


def test_zero_size():
    with pytest.raises(ZeroSetSize):
        apply_scale(1.0, 0, 3)


@settings(max_examples=300, deadline=None)
@given(raw=st.floats(0, 1e3), small=st.integers(1, 200), d1=st.integers(0, 200), d2=st.integers(0, 200))
def test_monotone_penalty(raw, small, d1, d2):
    lo, hi = sorted((d1, d2))
    a = apply_scale(raw, small, small + lo).scaled
    b = apply_scale(raw, small + hi, small).scaled
    assert b <= a
    assert a <= raw / small


@settings(max_examples=200, deadline=None)
@given(r1=st.floats(-1e3, 1e3), r2=st.floats(-1e3, 1e3), sa=st.integers(1, 100), sb=st.integers(1, 100))
def test_order_preserved_at_fixed_sizes(r1, r2, sa, sb):
    if r1 < r2:
        assert apply_scale(r1, sa, sb).scaled < apply_scale(r2, sa, sb).scaled


@settings(max_examples=200, deadline=None)
@given(s=st.floats(0.01, 1.0), n=st.integers(2, 100), m=st.integers(1, 99))
def test_size_similarity_perk(s, n, m):
    """Constant CS s under max matching: equal sizes give s, unequal give m*s/(m + ln(1+n-m))."""
    assert apply_scale(n * s, n, n).scaled == pytest.approx(s, rel=1e-12)
    if m < n:
        got = apply_scale(m * s, n, m).scaled
        assert got == pytest.approx(m * s / (m + math.log(1 + n - m)), rel=1e-12)
        assert got < s


def test_denominator_symmetric():
    assert scale_denominator(3, 9) == scale_denominator(9, 3)
