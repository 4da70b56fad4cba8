from __future__ import annotations

from fractions import Fraction

import pytest

from rising_orbits import limits
from rising_orbits.errors import DomainError
from rising_orbits.plane import build_six_points

F = Fraction


@pytest.fixture(scope="module")
def m():
    return build_six_points(max_stage=40)


def test_residual_bound():
    assert limits.residual_bound(30) == F(12, 67)


def test_orbit_record_and_csv(m):
    rec = limits.orbit(m, (0.1, 0.4), 3)
    assert rec.strips == [1, 2, 3, 4]
    assert [p[1] for p in rec.points][:2] == [0.4, 0.7]
    lines = rec.to_csv().splitlines()
    assert lines[0] == "step,r,s,strip"
    assert len(lines) == 5
    back = limits.orbit(m, rec.points[-1], 3, "backward")
    assert back.points[-1] == pytest.approx((0.1, 0.4), abs=1e-12)
    assert [row["step"] for row in back.rows()] == [0, -1, -2, -3]


def test_orbit_edges(m):
    rec = limits.orbit(m, (0.7, 1.0), 4)
    assert rec.points == [(0.7, 1.0)] * 5
    assert rec.strips == [None] * 5
    with pytest.raises(DomainError):
        limits.orbit(m, (0.0, 0.0), -1)


def test_cap_reached_status():
    small = build_six_points(max_stage=2)
    rec = limits.orbit(small, (0.1, 0.4), 50)
    assert rec.status == "cap-reached"
    assert len(rec.points) == 9


def test_omega_estimates(m):
    e = limits.estimate_omega(m, (0.1, 0.4), 20)
    assert e.edge == "top" and e.status == "completed"
    assert e.contains(0.0, float(e.residual))
    assert limits.estimate_omega(m, (-0.5, 0.4), 20).distance_to(-0.5) < 1e-9
    assert limits.estimate_omega(m, (0.1, 0.5), 20).distance_to(0.5) < 1e-9


def test_degenerate_estimates(m):
    e = limits.estimate_omega(m, (0.3, 1.0), 10)
    assert (e.lo, e.hi, e.samples) == (0.3, 0.3, 0)
    e = limits.estimate_alpha(m, (-1.0, 0.2), 10)
    assert (e.lo, e.hi) == (-1.0, -1.0)


def test_alpha_is_mirrored_omega(m):
    a = limits.estimate_alpha(m, (-0.2, 0.45), 15)
    b = limits.estimate_omega(limits.MirroredInverse(m), (-0.2, -0.45), 15)
    assert (a.lo, a.hi) == (b.lo, b.hi)
    assert a.edge == "bottom"


def test_estimate_json(m):
    e = limits.estimate_omega(m, (0.1, 0.4), 8)
    d = e.to_dict()
    assert set(d) == {"edge", "interval", "residual", "samples", "status"}
    assert d["residual"] == "12/23"
    assert e.to_json() == limits.estimate_omega(m, (0.1, 0.4), 8).to_json()


def test_classify_square_orbit(m):
    c = limits.classify_square_orbit(m, (0.1, 0.4))
    assert c.kind == "top-edge-limit"
    c = limits.classify_square_orbit(m, (0.1, 0.4), limits.ClassifyParams(direction="backward"))
    assert c.kind == "bottom-edge-limit"
    assert limits.classify_square_orbit(m, (0.2, -1.0)).kind == "fixed"


def test_classify_undetermined_on_cap():
    small = build_six_points(max_stage=3)
    c = limits.classify_square_orbit(small, (0.1, 0.4))
    assert c.kind == "undetermined"
    assert "cap" in c.detail
