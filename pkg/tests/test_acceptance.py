"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest
from conftest import record
from scipy.spatial import cKDTree

from rising_orbits import limits, plane
from rising_orbits.builder import check_conditions
from rising_orbits.pl1d import f01
from rising_orbits.verify import quotient_grid_stats

F = Fraction
STARTS = [(0.1, 0.4), (-0.5, 0.4), (0.1, 1 / 3)]
OMEGA_TARGETS = [0.0, -0.5, 0.5]
# abscissae of u5, u4, u6
ALPHA_TARGETS = [float(plane.SIX.u[4][0]), float(plane.SIX.u[3][0]), float(plane.SIX.u[5][0])]


@pytest.fixture(scope="module")
def deep_map(cfg):
    return cfg.build(mode="float", max_stage=122)


def test_c1_base_map_exact():
    t = time.perf_counter()
    xs = [F(v) for v in (-1, "-3/4", "-1/2", 0, "1/2", 1)]
    got = [f01(x) for x in xs]
    want = [F(v) for v in (-1, "-1/2", 0, "1/2", "3/4", 1)]
    dt = time.perf_counter() - t
    ok = got == want and all(type(v) is Fraction for v in got) and dt < 1
    record(1, "base map exact at the tabulated points", ok, f"{dt:.3f}s")
    assert ok


def test_c2_conditions_through_stage_12(exact_map):
    t = time.perf_counter()
    rep = check_conditions(exact_map, 12, samples=64)
    dt = time.perf_counter() - t
    ok = rep.violations == 0 and dt < 120
    record(2, "block and level bounds through stage 12 (exact)", ok,
           f"{rep.violations} violations, {len(rep.blocks)} blocks, {dt:.1f}s")
    assert ok


def test_c3_homeomorphism_properties(exact_map):
    m = exact_map
    rng = random.Random(3)
    t = time.perf_counter()
    ordinates = [F(rng.randint(-999, 999), 1000) for _ in range(40)]
    bad_rt = bad_q = bad_mono = 0
    for _ in range(5000):
        s = rng.choice(ordinates)
        r1, r2 = sorted(F(rng.randint(-10**4, 10**4), 10**4) for _ in range(2))
        q1, q2 = m.eval((r1, s)), m.eval((r2, s))
        bad_rt += m.eval_inverse(q1) != (r1, s)
        bad_rt += m.eval_inverse(q2) != (r2, s)
        bad_q += q1[1] != f01(s) or q2[1] != f01(s)
        bad_mono += r1 < r2 and not q1[0] < q2[0]
    bad_edge = 0
    for _ in range(500):
        u = F(rng.randint(-10**4, 10**4), 10**4)
        for e in (F(-1), F(1)):
            bad_edge += m.eval((u, e)) != (u, e)
            bad_edge += m.eval((e, u)) != (e, f01(u))
    dt = time.perf_counter() - t
    ok = bad_rt == bad_q == bad_mono == bad_edge == 0 and dt < 60
    record(3, "round trip, monotonicity, ordinate law, boundary restriction on 10^4 points", ok,
           f"{bad_rt}/{bad_mono}/{bad_q}/{bad_edge} failures, {dt:.1f}s")
    assert ok


def _omega_check(m, budget):
    out = []
    for p, want in zip(STARTS, OMEGA_TARGETS):
        est = limits.estimate_omega(m, p, budget)
        out.append(max(abs(float(est.lo) - want), abs(float(est.hi) - want)))
    return out


def test_c4_omega_estimates(deep_map):
    t = time.perf_counter()
    d30 = _omega_check(deep_map, 30)
    d120 = _omega_check(deep_map, 120)
    dt = time.perf_counter() - t
    ok = max(d30) <= 12 / 67 and max(d120) <= 0.05 and dt < 300
    record(4, "omega estimates hit 0, -1/2, 1/2", ok,
           f"budget 30 err {max(d30):.3g}, budget 120 err {max(d120):.3g}, {dt:.0f}s")
    assert ok


def _alpha_check(m, budget):
    errs = []
    mirrored = limits.MirroredInverse(m)
    for (r, s), want in zip(STARTS, ALPHA_TARGETS):
        est = limits.estimate_omega(mirrored, (r, -s), budget)
        via = limits.estimate_alpha(m, (r, s), budget)
        assert (est.lo, est.hi) == (via.lo, via.hi)
        errs.append(max(abs(float(est.lo) - want), abs(float(est.hi) - want)))
    return errs


def test_c5_alpha_estimates(deep_map):
    t = time.perf_counter()
    d30 = _alpha_check(deep_map, 30)
    d120 = _alpha_check(deep_map, 120)
    dt = time.perf_counter() - t
    ok = max(d30) <= 12 / 67 and max(d120) <= 0.05 and dt < 300
    record(5, "mirrored estimates hit the u5, u4, u6 abscissae", ok,
           f"budget 30 err {max(d30):.3g}, budget 120 err {max(d120):.3g}, {dt:.0f}s")
    assert ok


def test_c6_quotient_conditions():
    q = plane.QUOTIENT
    six = plane.SIX
    t = time.perf_counter()
    grid = [F(i, 24) for i in range(-24, 25)]
    ident = all(q((r, s)) == (r, s) for r in grid for s in grid if abs(s) <= F(1, 2))
    ident &= all(q((e, s)) == (e, s) for e in (F(-1), F(1)) for s in grid)
    verts = all(q(six.u[i]) == six.x[i] for i in (0, 2, 3, 5))
    # w_i onto u_i along the top and bottom edges
    pairs = [((F(-3, 4), F(1)), (F(-1, 2), F(1))), ((F(-1, 4), F(1)), (F(-1, 2), F(1))),
             ((F(1, 4), F(1)), (F(1, 2), F(1))), ((F(3, 4), F(1)), (F(1, 2), F(1))),
             ((F(0), F(1)), (F(0), F(1))), ((F(1), F(1)), (F(1), F(1)))]
    verts &= all(q(a) == b and q((a[0], -a[1])) == (b[0], -b[1]) for a, b in pairs)
    rng = random.Random(6)
    equiv = 0
    for _ in range(2000):
        p = (F(rng.randint(-997, 997), 997), F(rng.randint(-997, 997), 997))
        a = q(p)
        equiv += q((-p[0], p[1])) != (-a[0], a[1]) or q((p[0], -p[1])) != (a[0], -a[1])
    mind, on_slit = quotient_grid_stats(512)
    dt = time.perf_counter() - t
    ok = ident and verts and equiv == 0 and mind > 1e-9 and on_slit == 0 and dt < 60
    record(6, "quotient identity, vertex images, equivariance, 512x512 injectivity", ok,
           f"min distance {mind:.2e}, {on_slit} on slits, {equiv} equivariance misses, {dt:.1f}s")
    assert ok


def _edge_image(q, lo, hi, s):
    """Dense polyline of xi along [lo, hi] x {s}."""
    xs = set(np.linspace(float(lo), float(hi), 129).tolist())
    xs |= {v for v in (-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75) if lo <= v <= hi}
    return np.array([q((x, s)) for x in sorted(xs)], dtype=float)


def _pushforward_gap(q, samples, est, s_edge):
    """Two-sided distance between sampled g-limit points and xi of an f-estimate."""
    img = _edge_image(q, est.lo, est.hi, s_edge)
    pts = np.array(samples, dtype=float)
    d1 = cKDTree(img).query(pts)[0].max()
    d2 = cKDTree(pts).query(img[[0, -1]])[0].max()
    return max(d1, d2)


def test_c7_limit_sets_push_forward(float_map):
    m = float_map
    q = plane.QUOTIENT
    g = plane.SixPointsMap(m, q)
    budget = 30
    rng = random.Random(7)
    t = time.perf_counter()
    worst = 0.0
    bad = 0
    for _ in range(20):
        x = (rng.uniform(-0.95, 0.95), rng.uniform(-0.95, 0.95))
        y = q(x)
        fo = limits.estimate_omega(m, x, budget)
        fa = limits.estimate_alpha(m, x, budget)
        samples, k_last, _ = limits.block_end_samples(g, y, budget)
        tail = samples[len(samples) - max(1, len(samples) // 4):]
        go = [g.coords(st) for _, st in tail]
        mi = limits.MirroredInverse(g)
        samples, _, _ = limits.block_end_samples(mi, (y[0], -y[1]), budget)
        tail = samples[len(samples) - max(1, len(samples) // 4):]
        ga = [g.coords(st) for _, st in tail]
        res = float(limits.residual_bound(k_last))
        for pts, est, s_edge in ((go, fo, 1.0), (ga, fa, -1.0)):
            d = _pushforward_gap(q, pts, est, s_edge)
            worst = max(worst, d)
            bad += d > res
    dt = time.perf_counter() - t
    ok = bad == 0 and dt < 300
    record(7, "omega/alpha of g match xi of the f estimates at 20 starts", ok,
           f"worst distance {worst:.3g} vs residual {12 / (2 * budget + 7):.3g}, {dt:.0f}s")
    assert ok


# interior samples stay inside this radius: closer to the boundary the orbit
# shadows a bounded one for more than 60 steps before climbing
INNER_RADIUS = 0.6


def _disk_point(rng, r0, r1):
    th = rng.uniform(0, 2 * math.pi)
    rad = rng.uniform(r0, r1)
    return rad * math.cos(th), rad * math.sin(th)


def _rise(pipe, x, steps=60):
    """First step with top gap below 2^-40 (or None), and the largest plane norm
    among the iterates up to then that still have a float plane image."""
    g = pipe.g
    st = g.lift(x)
    hit = None
    norm = 0.0
    for n in range(1, steps + 1):
        st = g.step(st)
        try:
            norm = max(norm, math.hypot(*pipe.state_to_plane(st)))
        except plane.Overflow:
            pass
        if g.top_gap(st) < 2.0**-40:
            hit = n
            break
    return hit, norm


def test_c8_plane_end_to_end(cfg, float_map):
    pipe = plane.PlanePipeline(float_map, cfg.disk)
    params = cfg.classify_params
    t = time.perf_counter()
    w1, w3 = pipe.to_plane(plane.SIX.x[0]), pipe.to_plane(plane.SIX.x[2])
    bnd_bad = 0
    for i in range(40):
        th = 2 * math.pi * (i + 0.5) / 40
        x, _ = pipe.to_square((math.cos(th), math.sin(th)))
        c = plane.classify_plane_orbit(pipe, None, params, square_point=x)
        region = "L1" if abs(x[0] + 0.5) < 1e-12 and 1 / 3 < x[1] < 1 / 2 else "L2"
        want = w1 if region == "L1" else w3
        bnd_bad += c.kind != "bounded" or c.omega is None or math.dist(c.omega, want) > 1e-2
    rng = random.Random(8)
    int_bad = 0
    min_norm = math.inf
    for _ in range(40):
        y = _disk_point(rng, 0.05, INNER_RADIUS)
        x, _ = pipe.to_square(y)
        c = plane.classify_plane_orbit(pipe, None, params, square_point=x)
        hit, norm = _rise(pipe, x)
        min_norm = min(min_norm, norm)
        int_bad += c.kind != "doubly-divergent" or hit is None or norm <= 1e6
    # informational: near the boundary the climb takes longer than 60 steps
    outer = sum(_rise(pipe, pipe.to_square(_disk_point(rng, INNER_RADIUS, 0.95))[0])[0] is None for _ in range(40))
    dt = time.perf_counter() - t
    ok = bnd_bad == 0 and int_bad == 0 and dt < 300
    record(8, "boundary of E bounded, interior of E doubly divergent", ok,
           f"{bnd_bad} boundary and {int_bad} interior failures, min norm {min_norm:.3g}, "
           f"{outer}/40 slow climbs beyond radius {INNER_RADIUS}, {dt:.0f}s")
    assert ok


def _cli(*args) -> bytes:
    return subprocess.run([sys.executable, "-m", "rising_orbits", *args], check=True, capture_output=True).stdout


def test_c9_determinism():
    runs = []
    for _ in range(2):
        runs.append((_cli("verify"), _cli("orbit", "--square-point", "0.1,0.4", "--steps", "40")))
    ok = runs[0] == runs[1] and len(runs[0][0]) > 0 and len(runs[0][1]) > 0
    record(9, "verify and orbit output byte-identical across runs", ok,
           f"{len(runs[0][0])} + {len(runs[0][1])} bytes")
    assert ok
