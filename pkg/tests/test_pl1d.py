from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rising_orbits.errors import DomainError, NotInvertible, RangeError
from rising_orbits.pl1d import (
    MonotonePL1D,
    as_scalar,
    edge_gap,
    eval_pl,
    f01,
    f01_inv,
    from_strip,
    invert_pl,
    level,
    strip_number,
    to_strip,
)

F = Fraction
unit = st.fractions(min_value=-1, max_value=1, max_denominator=10**6)
open_unit = unit.filter(lambda s: -1 < s < 1)


def test_f01_pieces():
    assert f01(F(1, 2)) == F(3, 4)
    assert f01(F(-1, 4)) == F(1, 4)
    assert f01(F(-7, 8)) == F(-3, 4)
    assert f01(0.5) == pytest.approx(0.75)
    assert isinstance(f01(0.5), float)


@given(unit)
def test_f01_reflection_identity(s):
    assert f01(-s) == -f01_inv(s)


@given(unit)
def test_f01_round_trip(s):
    assert f01_inv(f01(s)) == s


def test_levels():
    assert [level(n) for n in range(-2, 3)] == [F(-3, 4), F(-1, 2), 0, F(1, 2), F(3, 4)]
    assert all(f01(level(n)) == level(n + 1) for n in range(-20, 20))
    assert level(3, exact=False) == 0.875


@given(open_unit)
def test_strip_coordinates_round_trip(s):
    n, sigma = to_strip(s)
    assert 0 <= sigma < 1
    assert level(n - 1) <= s < level(n)
    assert from_strip(n, sigma) == s
    assert strip_number(f01(s)) == n + 1


def test_levels_belong_to_strip_above():
    assert strip_number(F(0)) == 1
    assert strip_number(F(1, 2)) == 2
    assert strip_number(F(-1, 2)) == 0
    with pytest.raises(DomainError):
        strip_number(F(1))


def test_edge_gap_beyond_float_resolution():
    assert edge_gap(80, 0.0) == pytest.approx(2.0**-79)
    assert edge_gap(80, 0.5) == pytest.approx(1.5 * 2.0**-80)


def test_monotone_pl_eval_and_invert():
    m = MonotonePL1D.from_points([(-1, -1), (0, F(1, 3)), (1, 1)])
    assert eval_pl(m, F(1, 2)) == F(2, 3)
    assert invert_pl(m, F(2, 3)) == F(1, 2)
    with pytest.raises(DomainError):
        eval_pl(m, F(3, 2))
    with pytest.raises(RangeError):
        invert_pl(m, F(-2))


def test_monotone_pl_validation():
    with pytest.raises(ValueError):
        MonotonePL1D.from_points([(0, 0), (0, 1)])
    with pytest.raises(ValueError):
        MonotonePL1D.from_points([(0, 1), (1, 0)])
    flat = MonotonePL1D.from_points([(0, 0), (1, 1), (2, 1)], strict=False)
    with pytest.raises(NotInvertible):
        invert_pl(flat, F(1))


def test_float_tolerance_at_domain_edge():
    m = MonotonePL1D.identity(exact=False)
    assert eval_pl(m, 1.0 + 1e-15) == 1.0
    with pytest.raises(DomainError):
        eval_pl(m, 1.1)


def test_as_scalar_modes():
    assert as_scalar(0.1, True) == F(1, 10)
    assert as_scalar("3/7", False) == pytest.approx(3 / 7)
    with pytest.raises(DomainError):
        as_scalar(float("nan"), False)
