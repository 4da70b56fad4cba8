"""Invariant suite behind ``rising-orbits verify``; deterministic for a fixed config."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from . import limits, plane
from .builder import BuiltSquareMap, check_conditions, pull_fraction
from .config import Config, family_to_dict
from .pl1d import MonotonePL1D, eval_pl, f01, f01_inv, invert_pl, level
from .profiles import DenseGrid, truncate


@dataclass
class Check:
    module: str
    name: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"module": self.module, "name": self.name, "ok": self.ok, "detail": self.detail}


def _rand_q(rng: random.Random, lo=-1, hi=1, den=997) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def check_pl1d(rng) -> list[Check]:
    out = []
    xs = [Fraction(v) for v in (-1, "-3/4", "-1/2", 0, "1/2", 1)]
    want = [Fraction(v) for v in (-1, "-1/2", 0, "1/2", "3/4", 1)]
    out.append(Check("pl1d", "f01 at tabulated points", [f01(x) for x in xs] == want))
    bad = sum(f01(-s) != -f01_inv(s) for s in (_rand_q(rng) for _ in range(1000)))
    out.append(Check("pl1d", "vertical reflection identity", bad == 0, f"{bad} mismatches"))
    bad = 0
    for _ in range(50):
        k = rng.randint(2, 8)
        pts = sorted({_rand_q(rng) for _ in range(k)} | {Fraction(-1), Fraction(1)})
        ys = sorted(rng.sample(range(-1000, 1000), len(pts)))
        m = MonotonePL1D(tuple(pts), tuple(Fraction(y, 1000) for y in ys))
        for _ in range(20):
            y = m.ys[0] + (m.ys[-1] - m.ys[0]) * Fraction(rng.randint(0, 1000), 1000)
            bad += eval_pl(m, invert_pl(m, y)) != y
    out.append(Check("pl1d", "PL inversion round trip", bad == 0, f"{bad} mismatches"))
    ok = all(level(n) < level(n + 1) for n in range(-30, 30)) and level(0) == 0
    out.append(Check("pl1d", "levels increase through t_0 = 0", ok))
    return out


def check_profiles(cfg: Config, rng) -> list[Check]:
    out = []
    for fam in (cfg.omega_family, cfg.alpha_family):
        mono = all(
            truncate(m.set, k)[0] >= truncate(m.set, k + 1)[0] and truncate(m.set, k)[1] <= truncate(m.set, k + 1)[1]
            for m in fam for k in range(1, 50)
        )
        out.append(Check("profiles", f"{fam.side}: truncation nested", mono))
        disjoint = True
        for k in range(1, 21):
            ivs = sorted(truncate(m.set, k) for m in fam)
            disjoint &= all(a[1] < b[0] for a, b in zip(ivs, ivs[1:]))
        out.append(Check("profiles", f"{fam.side}: truncations disjoint", disjoint))
        exhaust = True
        for m in fam:
            if m.set.is_point:
                continue
            for _ in range(10):
                x = m.set.a + (m.set.b - m.set.a) * Fraction(rng.randint(1, 999), 1000)
                lo, hi = truncate(m.set, 10**4)
                exhaust &= lo <= x <= hi
        out.append(Check("profiles", f"{fam.side}: truncations exhaust members", exhaust))
        grid = DenseGrid(fam.profiles)
        pref = set(grid.prefix(1022))
        ok = all(set(p.discontinuities) <= pref for p in fam.profiles)
        ok &= all(set(grid.prefix(k)) < set(grid.prefix(k + 1)) for k in range(40))
        out.append(Check("profiles", f"{fam.side}: grid nested and holds all jumps", ok))
    return out


def check_builder(m: BuiltSquareMap, rng, points: int = 1000, stage: int = 6) -> list[Check]:
    out = []
    sc = m.scalar
    ex = [
        (m.eval((sc("3/10"), sc("-1/5"))), (sc("3/10"), sc("3/10"))),
        (m.eval((sc(-1), sc(0))), (sc(-1), sc("1/2"))),
        (m.eval((sc("7/10"), sc(1))), (sc("7/10"), sc(1))),
        (m.eval((sc(-1), sc("9/10"))), (sc(-1), sc("19/20"))),
        (m.eval_inverse((sc("3/10"), sc("3/10"))), (sc("3/10"), sc("-1/5"))),
    ]
    ok = all(_close(a, b, m.exact) for a, b in ex)
    out.append(Check("builder", "evaluation examples", ok))
    # few distinct ordinates keep the number of tracked slices small
    ss = [Fraction(rng.randint(-990, 990), 1000) for _ in range(16)]
    bad_rt = bad_q = bad_mono = 0
    for _ in range(points):
        r1, r2 = sorted((_rand_q(rng), _rand_q(rng)))
        s = rng.choice(ss)
        p1, p2 = (sc(r1), sc(s)), (sc(r2), sc(s))
        q1, q2 = m.eval(p1), m.eval(p2)
        bad_rt += not _close(m.eval_inverse(q1), p1, m.exact)
        bad_q += not _close(q1[1], f01(sc(s)), m.exact)
        bad_mono += r1 < r2 and not q1[0] < q2[0]
    out.append(Check("builder", "round trip", bad_rt == 0, f"{bad_rt} of {points}"))
    out.append(Check("builder", "ordinate law", bad_q == 0, f"{bad_q} of {points}"))
    out.append(Check("builder", "strict horizontal monotonicity", bad_mono == 0, f"{bad_mono} of {points}"))
    bad = 0
    for s in ss[:8]:
        for e in (-1, 1):
            p = (sc(e), sc(s))
            bad += not _close(m.eval(p), (sc(e), f01(sc(s))), m.exact)
        for r in (_rand_q(rng) for _ in range(4)):
            for e in (-1, 1):
                bad += m.eval((sc(r), sc(e))) != (sc(r), sc(e))
    out.append(Check("builder", "boundary restriction", bad == 0, f"{bad} mismatches"))
    out.append(Check("builder", "anchor-orbit law", anchor_law_violations(m, 3) == 0))
    rep = check_conditions(m, stage)
    out.append(Check("builder", f"block and level bounds through stage {stage}", rep.ok, f"{rep.violations} violations"))
    return out


def anchor_law_violations(m: BuiltSquareMap, stages: int) -> int:
    """Recompute anchor orbits by the pull recurrence and compare with the map."""
    b = m.upper
    bad = 0
    for k in range(1, stages + 1):
        for lo, hi, _ in b.bands(k):
            for sg in {lo, hi}:
                d = b.stage_data(sg, k)
                c = pull_fraction(k)
                for x0, t in zip(d.x0, d.targets):
                    x = x0
                    for i in range(1, 2 * k + 2):
                        y = b.forward(k * k + i - 1, sg, x)
                        want = x0 + i * (t - x0) / c
                        if not _close(y, want, b.exact):
                            bad += 1
                        x = y
    return bad


def _close(a, b, exact: bool, tol: float = 1e-9) -> bool:
    if isinstance(a, tuple):
        return all(_close(x, y, exact, tol) for x, y in zip(a, b))
    return a == b if exact else abs(float(a) - float(b)) <= tol


def check_limits(m: BuiltSquareMap, rng, budget: int = 8) -> list[Check]:
    out = []
    sc = m.scalar
    e1 = limits.estimate_omega(m, (sc("0.3"), sc(1)), budget)
    e2 = limits.estimate_omega(m, (sc(-1), sc("0.2")), budget)
    e3 = limits.estimate_alpha(m, (sc(1), sc("0.2")), budget)
    ok = (e1.lo, e1.hi) == (sc("0.3"),) * 2 and (e2.lo, e2.hi) == (-1, -1) and (e3.lo, e3.hi) == (1, 1)
    out.append(Check("limits", "edge starts give degenerate estimates", ok))
    st = (sc("0.1"), sc("0.4"))
    a = limits.estimate_alpha(m, st, budget)
    b = limits._estimate(limits.MirroredInverse(m), (st[0], -st[1]), budget, "bottom")
    out.append(Check("limits", "alpha estimate equals omega estimate of the mirrored inverse",
                     (a.lo, a.hi) == (b.lo, b.hi)))
    rec = limits.orbit(m, (sc(-1), sc(0)), 2)
    out.append(Check("limits", "side edge orbit", _close(rec.points[2], (sc(-1), sc("3/4")), m.exact)))
    s = sc("0.45")
    rs = [sc(Fraction(i, 8)) for i in range(-7, 8)]
    ests = [limits.estimate_omega(m, (r, s), budget) for r in rs]
    res = float(ests[0].residual)
    ok = all(float(p.lo) <= float(q.lo) + res and float(p.hi) <= float(q.hi) + res for p, q in zip(ests, ests[1:]))
    out.append(Check("limits", "estimates increase with the abscissa", ok))
    return out


def check_plane(cfg: Config, m: BuiltSquareMap, rng, grid: int = 128, budget: int = 20) -> list[Check]:
    out = []
    q = plane.QUOTIENT
    F = Fraction
    ok = all(q((r, s)) == (r, s) for r in (F(i, 16) for i in range(-16, 17)) for s in (F(j, 8) for j in range(-4, 5)))
    ok &= all(q((r, s)) == (r, s) for r in (-1, 0, 1) for s in (F(j, 16) for j in range(-16, 17)))
    out.append(Check("plane", "quotient identity region", ok))
    six = plane.SIX
    ok = q(six.u[2]) == six.x[2] and q(six.w[2]) == six.u[2] and q(six.w[3]) == six.u[2]
    ok &= q(((F(1, 8)), F(1))) == (F(1, 4), F(1)) and q((F(3, 8), F(1))) == (F(1, 2), F(7, 8))
    out.append(Check("plane", "quotient vertex and segment images", ok))
    bad = 0
    for _ in range(1000):
        p = (_rand_q(rng), _rand_q(rng))
        a = q(p)
        bad += q((-p[0], p[1])) != (-a[0], a[1]) or q((p[0], -p[1])) != (a[0], -a[1])
    out.append(Check("plane", "quotient reflection equivariance", bad == 0, f"{bad} mismatches"))
    mind, on_slit = quotient_grid_stats(grid)
    out.append(Check("plane", f"quotient injective on a {grid}x{grid} grid", mind > 1e-9 and on_slit == 0,
                     f"min distance {mind:.3e}, {on_slit} images on slits"))
    bad = 0
    for _ in range(300):
        y = (rng.uniform(-5, 5), rng.uniform(-5, 5))
        z = plane.disk_conjugacy(cfg.disk, plane.disk_conjugacy(cfg.disk, y), "backward")
        bad += math.dist(y, z) > 1e-9
        p = (rng.uniform(-0.99, 0.99), rng.uniform(-0.99, 0.99))
        bad += math.dist(plane.tangent_invert(plane.tangent_eval(p))[0], p) > 1e-12
    out.append(Check("plane", "chart round trips", bad == 0, f"{bad} failures"))
    is_six = [family_to_dict(f) for f in plane.six_points_families()] == [
        family_to_dict(cfg.omega_family), family_to_dict(cfg.alpha_family)]
    if is_six and not m.exact:
        pipe = plane.PlanePipeline(m, cfg.disk)
        params = limits.ClassifyParams(cfg.delta_edge, cfg.delta_cauchy, budget)
        kinds = [plane.classify_plane_orbit(pipe, None, params, square_point=x).kind
                 for x in ((-0.5, 0.42), (0.2, 0.5), (0.5, 0.4), (0.1, 1 / 3))]
        out.append(Check("plane", "boundary points of E are bounded", kinds == ["bounded"] * 4, ",".join(kinds)))
        kinds = [plane.classify_plane_orbit(pipe, None, params, square_point=x).kind
                 for x in ((0.0, 0.4), (0.2, 0.45), (-0.3, 0.38), (0.35, 0.42))]
        out.append(Check("plane", "interior points of E diverge both ways",
                         kinds == ["doubly-divergent"] * 4, ",".join(kinds)))
    return out


def quotient_grid_stats(n: int) -> tuple[float, int]:
    """Minimum pairwise image distance on an n x n interior grid, and images on slits."""
    q = plane.QUOTIENT
    pts = []
    on = 0
    for i in range(n):
        for j in range(n):
            p = (-1 + (2 * i + 1) / n, -1 + (2 * j + 1) / n)
            im = q(p)
            on += plane.on_slit_interior(im)
            pts.append(im)
    arr = np.array(pts)
    d, _ = cKDTree(arr).query(arr, k=2)
    return float(d[:, 1].min()), int(on)


def run_suite(cfg: Config, m: BuiltSquareMap | None = None, *, seed: int = 20240601, points: int = 1000,
              stage: int = 6) -> list[Check]:
    rng = random.Random(seed)
    m = m or cfg.build()
    return [
        *check_pl1d(rng),
        *check_profiles(cfg, rng),
        *check_builder(m, rng, points, stage),
        *check_limits(m, rng),
        *check_plane(cfg, m, rng),
    ]
