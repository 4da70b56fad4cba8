from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rising_orbits.builder import (
    BuiltSquareMap,
    anchor_abscissa,
    check_conditions,
    init,
    pull_fraction,
    reflect_alpha_family,
    stage_of_strip,
)
from rising_orbits.errors import CapReached, DomainError, ReflectionCollision, StageOverflow
from rising_orbits.pl1d import f01
from rising_orbits.plane import six_points_families
from rising_orbits.profiles import Interval, IntervalFamily, Member, identity_profile
from rising_orbits.verify import anchor_law_violations

F = Fraction
coord = st.fractions(min_value=-1, max_value=1, max_denominator=400)
ORDINATES = [F(i, 40) for i in range(-39, 40)]


@pytest.fixture(scope="module")
def m():
    om, al = six_points_families()
    return init(om, al, exact=True, max_stage=12)


@pytest.fixture(scope="module")
def mf():
    om, al = six_points_families()
    return init(om, al, exact=False, max_stage=12)


def test_stage_bookkeeping():
    assert [stage_of_strip(n) for n in (0, 1, 3, 4, 8, 9)] == [0, 1, 1, 2, 2, 3]
    assert pull_fraction(1) == 9
    assert anchor_abscissa(F(0), F(1), 2, 1) == F(2, 9)


def test_frozen_examples(m):
    assert m.eval((F(3, 10), F(-1, 5))) == (F(3, 10), F(3, 10))
    assert m.eval((F(-1), F(0))) == (F(-1), F(1, 2))
    assert m.eval((F(3, 10), F(-1, 2))) == (F(3, 10), F(0))
    assert m.eval((F(7, 10), F(1))) == (F(7, 10), F(1))
    assert m.eval_inverse((F(3, 10), F(3, 10))) == (F(3, 10), F(-1, 5))


@settings(max_examples=200, deadline=None)
@given(coord, coord, st.sampled_from(ORDINATES))
def test_round_trip_and_order(m, r1, r2, s):
    q1, q2 = m.eval((r1, s)), m.eval((r2, s))
    assert m.eval_inverse(q1) == (r1, s)
    assert q1[1] == f01(s)
    assert (r1 < r2) == (q1[0] < q2[0])


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.sampled_from([float(s) for s in ORDINATES]))
def test_float_round_trip(mf, r, s):
    back = mf.eval_inverse(mf.eval((r, s)))
    assert back == pytest.approx((r, s), abs=1e-12)


@given(coord)
def test_boundary_restriction(m, u):
    for e in (F(-1), F(1)):
        assert m.eval((u, e)) == (u, e)
        assert m.eval((e, u)) == (e, f01(u))


def test_anchor_law(m):
    assert anchor_law_violations(m, 3) == 0


def test_conditions_small(m):
    rep = check_conditions(m, 5, samples=16)
    assert rep.ok
    assert len(rep.blocks) == 6


def test_out_of_square(m):
    with pytest.raises(DomainError):
        m.eval((F(2), F(0)))


def test_stage_cap():
    om, al = six_points_families()
    m = init(om, al, exact=False, max_stage=2)
    with pytest.raises(CapReached):
        m.eval((0.1, 1 - 2.0**-12))
    m.advance_to(2)
    with pytest.raises(StageOverflow):
        m.advance_stage()


def test_reflected_family_moves_level_zero():
    al = IntervalFamily(
        (Member(1, Interval.point(F(1, 2)), identity_profile("alpha")),
         Member(2, Interval.open(F(1, 4), F(1, 3)), identity_profile("alpha"))), "alpha")
    out = reflect_alpha_family(al)
    assert [str(v.set) for v in out] == ["{1/2}", "(1/6, 1/4)"]


def test_reflection_collision():
    # (0, 1/2] reflects cleanly: the level 0 image is moved up to 1/2
    ok = IntervalFamily((Member(1, Interval(F(0), F(1, 2), False, True), identity_profile("alpha")),), "alpha")
    assert [str(v.set) for v in reflect_alpha_family(ok)] == ["{1/2}", "(0, 1/2)"]
    # an unvalidated member touching 0 lands on the moved level
    al = IntervalFamily(
        (Member(1, Interval.point(F(1, 2)), identity_profile("alpha")),
         Member(2, Interval.closed(0, F(1, 4)), identity_profile("alpha"))), "alpha")
    with pytest.raises(ReflectionCollision):
        reflect_alpha_family(al)


def test_save_load(tmp_path, m):
    m.advance_to(2)
    path = tmp_path / "map.json"
    m.save(path)
    back = BuiltSquareMap.load(path)
    assert back.stage >= 2
    assert back.eval((F(1, 10), F(2, 5))) == m.eval((F(1, 10), F(2, 5)))
