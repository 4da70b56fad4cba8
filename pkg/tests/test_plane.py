from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rising_orbits import plane
from rising_orbits.errors import DomainError, InvalidDisk, Overflow
from rising_orbits.limits import ClassifyParams

F = Fraction
Q = plane.QUOTIENT
sq = st.fractions(min_value=-1, max_value=1, max_denominator=500)
inner = st.floats(-0.999, 0.999)


@pytest.fixture(scope="module")
def pipe():
    return plane.PlanePipeline(plane.build_six_points(max_stage=40))


def test_quotient_frozen_values():
    assert Q((F(1, 8), F(1))) == (F(1, 4), F(1))
    assert Q((F(3, 8), F(1))) == (F(1, 2), F(7, 8))
    assert Q(plane.SIX.u[0]) == plane.SIX.x[0]
    assert Q((F(-3, 4), F(-1))) == (F(-1, 2), F(-1))
    assert Q((F(1, 4), F(3, 4))) == (F(1, 4), F(3, 4))


@given(sq, sq)
def test_quotient_reflections(r, s):
    a = Q((r, s))
    assert Q((-r, s)) == (-a[0], a[1])
    assert Q((r, -s)) == (a[0], -a[1])


@given(sq, sq)
def test_quotient_invert_contains_preimage(r, s):
    y = Q((r, s))
    assert (r, s) in Q.invert(y)


def test_slit_points_have_two_preimages():
    pre = Q.invert((F(1, 2), F(7, 8)))
    assert sorted(pre) == [(F(3, 8), F(1)), (F(5, 8), F(1))]
    assert plane.on_slit_interior((F(1, 2), F(7, 8)))
    assert not plane.on_slit_interior((F(1, 2), F(3, 4)))


def test_quotient_errors():
    with pytest.raises(DomainError):
        Q((F(2), F(0)))
    with pytest.raises(DomainError):
        Q.invert((F(0), F(-3, 2)))
    # onto: every point of the square has a preimage
    assert Q.invert((F(5, 16), F(1))) == [(F(5, 32), F(1))]


@settings(deadline=None)
@given(inner, inner)
def test_tangent_round_trip(r, s):
    y = plane.tangent_eval((r, s))
    back, _ = plane.tangent_invert(y)
    assert back == pytest.approx((r, s), abs=1e-12)


def test_tangent_overflow():
    with pytest.raises(Overflow):
        plane.tangent_eval((0.0, 1.0))
    assert plane.tangent_eval((0.0, 0.5), gaps=(1.0, 1e-6))[1] == pytest.approx(2 / (math.pi * 1e-6), rel=1e-6)


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_disk_conjugacy_round_trip(x, y):
    e = plane.DiskSpec("ellipse", (0.5, -0.2), semi_axes=(2.0, 0.5))
    z = plane.disk_conjugacy(e, plane.disk_conjugacy(e, (x, y)), "backward")
    assert z == pytest.approx((x, y), abs=1e-9)


def test_disk_conjugacy_boundary():
    e = plane.DiskSpec.unit_disk()
    g = plane.G_RECT
    for th in (0.1, 1.0, 2.5, 4.0):
        rho = g.radius(th)
        p = (g.center[0] + rho * math.cos(th), g.center[1] + rho * math.sin(th))
        assert math.hypot(*plane.disk_conjugacy(e, p)) == pytest.approx(1.0)


def test_disk_validation():
    with pytest.raises(InvalidDisk):
        plane.DiskSpec("ellipse", semi_axes=(1.0, 0.0))
    with pytest.raises(InvalidDisk):
        plane.DiskSpec("star-polygon", vertices=((1.0, 0.0), (0.0, 1.0)))
    with pytest.raises(InvalidDisk):
        plane.DiskSpec("star-polygon", vertices=((1.0, 0.0), (-1.0, 1.0), (-1.0, -1.0))[::-1])
    star = plane.DiskSpec("star-polygon", vertices=((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)))
    assert star.radius(math.pi / 4) == pytest.approx(math.sqrt(0.5))


def test_six_points_map_semi_conjugacy(pipe):
    g, f = pipe.g, pipe.f
    for x in [(0.1, 0.4), (0.3, 0.7), (-0.6, -0.55), (0.9, 0.2)]:
        assert g(Q(x)) == pytest.approx(Q(f.eval(x)), abs=1e-12)
        assert g(g(Q(x)), "backward") == pytest.approx(Q(x), abs=1e-12)


def test_plane_map_inverse(pipe):
    for y in [(0.2, 0.3), (-1.5, 0.4), (3.0, -2.0)]:
        assert pipe(pipe(y), "backward") == pytest.approx(y, abs=1e-8)


def test_plane_classification(pipe):
    params = ClassifyParams(stage_budget=20)
    c = plane.classify_plane_orbit(pipe, None, params, square_point=(-0.5, 0.42))
    assert c.kind == "bounded"
    assert c.omega == pytest.approx(pipe.to_plane(plane.SIX.x[0]))
    assert c.alpha == pytest.approx(pipe.to_plane(plane.SIX.x[3]))
    c = plane.classify_plane_orbit(pipe, pipe.to_plane((0.0, 0.4)), params)
    assert c.kind == "doubly-divergent"
    assert c.to_dict()["kind"] == "doubly-divergent"


def test_six_points_regions():
    six = plane.SIX
    assert six.region((F(-1, 2), F(2, 5))) == "L1"
    assert six.region((F(1, 2), F(2, 5))) == "L2"
    assert six.region((F(0), F(1, 3))) == "L2"
    assert six.region((F(0), F(2, 5))) == "interior"
    assert six.region((F(0), F(3, 5))) == "outside"
