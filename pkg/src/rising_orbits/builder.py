"""Staged construction of a normally rising homeomorphism of the square J^2.

Coordinates
-----------
A point of the open square is stored in *strip coordinates* ``(r, n, sigma)``:
``n`` is the strip D_n = J x [t_{n-1}, t_n] holding it and ``sigma`` in [0, 1] is
its relative height inside the strip.  On every strip the ordinate map f01 is
affine, so f sends ``(r, n, sigma)`` to ``(F_n(r, sigma), n + 1, sigma)``: the
relative height never changes.  The whole map is therefore a family, indexed
by sigma, of increasing PL homeomorphisms ``F_n(., sigma)`` of J.

Stages
------
Stage 0 is f02 on D_0.  Stage k >= 1 defines F_n for the 2k+1 strips
n = k^2 .. (k+1)^2 - 1.  At stage k the members V_1..V_k (truncated to V_mk) give
closed sigma-intervals ``2 * V_mk``; on those "anchor bands" F_n interpolates the
anchor orbits of the grid abscissae R_k, elsewhere ("gap bands") it blends the
two bounding level maps affinely in sigma.

Because sigma is invariant, the anchor abscissae at a given sigma depend only on
the maps at that same sigma (plus the band boundaries).  Each sigma gets a lazily
extended :class:`_Slice` that tracks where the grid abscissae have been carried.
"""

from __future__ import annotations

import json
import threading
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from . import pl1d
from .errors import CapReached, DomainError, InternalOrderViolation, ReflectionCollision, StageOverflow
from .pl1d import as_scalar, from_strip, is_exact, to_strip
from .profiles import (
    HALF,
    DenseGrid,
    Interval,
    IntervalFamily,
    Member,
    normalize_family,
    profile_target,
    truncate,
)

FORMAT_VERSION = 1
DEFAULT_MAX_STAGE = 64
DEFAULT_SNAP_BITS = 256


def stage_of_strip(n: int) -> int:
    """Construction stage that defines F_n (n >= 0)."""
    return isqrt(n) if n >= 1 else 0


def pull_fraction(k: int) -> int:
    """Denominator 2k+7 of the per-step pull toward the target at stage k."""
    return 2 * k + 7


def anchor_abscissa(x0, target, i: int, k: int):
    """Abscissa of the i-th image (0 <= i <= 2k+1) of an anchor starting at x0."""
    return x0 + i * (target - x0) / pull_fraction(k)


# --------------------------------------------------------------------------- PL kernels


def _interp_exact(x, xs, ys):
    j = bisect_right(xs, x)
    if j >= len(xs):
        if x > xs[-1]:
            raise DomainError(f"{x} outside [{xs[0]}, {xs[-1]}]")
        return ys[-1]
    if j == 0:
        raise DomainError(f"{x} outside [{xs[0]}, {xs[-1]}]")
    x0 = xs[j - 1]
    if x == x0:
        return ys[j - 1]
    return ys[j - 1] + (x - x0) * (ys[j] - ys[j - 1]) / (xs[j] - x0)


class _Kernel:
    """Arithmetic back end: tuples of Fractions, or numpy float arrays."""

    def __init__(self, exact: bool):
        self.exact = exact
        if exact:
            self.one, self.zero = Fraction(1), Fraction(0)
            self.identity = ((Fraction(-1), Fraction(1)), (Fraction(-1), Fraction(1)))
        else:
            self.one, self.zero = 1.0, 0.0
            ident = np.array([-1.0, 1.0])
            self.identity = (ident, ident)

    def scalar(self, v):
        return as_scalar(v, self.exact)

    def vec(self, values):
        if self.exact:
            return tuple(values)
        return np.asarray(list(values), dtype=float)

    def interp(self, x, xs, ys):
        if self.exact:
            return _interp_exact(x, xs, ys)
        if x < xs[0] - pl1d.EPS_DOM or x > xs[-1] + pl1d.EPS_DOM:
            raise DomainError(f"{x} outside [{xs[0]}, {xs[-1]}]")
        return float(np.interp(x, xs, ys))

    def interp_many(self, x, xs, ys):
        if self.exact:
            return [_interp_exact(v, xs, ys) for v in x]
        return np.interp(x, xs, ys)

    def anchor_nodes(self, x0, tg, i: int, k: int):
        c = pull_fraction(k)
        if self.exact:
            a = tuple(p + (i - 1) * (t - p) / c for p, t in zip(x0, tg))
            b = tuple(p + i * (t - p) / c for p, t in zip(x0, tg))
            return a, b
        d = (tg - x0) / c
        return x0 + (i - 1) * d, x0 + i * d

    def blend(self, lo_nodes, hi_nodes, w):
        (xa, ya), (xb, yb) = lo_nodes, hi_nodes
        if self.exact:
            xs = tuple(sorted(set(xa) | set(xb)))
            va = [_interp_exact(x, xa, ya) for x in xs]
            vb = [_interp_exact(x, xb, yb) for x in xs]
            return xs, tuple((1 - w) * p + w * q for p, q in zip(va, vb))
        xs = np.union1d(xa, xb)
        return xs, (1.0 - w) * np.interp(xs, xa, ya) + w * np.interp(xs, xb, yb)


# --------------------------------------------------------------------------- slices


@dataclass
class _StageData:
    kind: str  # "anchor" | "gap"
    member: int = 0  # 1-based member index for anchors
    rs: tuple = ()
    x0: object = None
    targets: object = None
    lo: object = None  # gap band bounds in sigma; lo == 0 means the level below
    hi: object = None
    w: object = None


class _Slice:
    def __init__(self, builder: "RisingBuilder", sigma):
        self.b = builder
        self.sigma = sigma
        self.stages: list[_StageData | None] = [None]
        self.first_anchor = builder._first_anchor_stage(sigma)
        self.pos = None
        if self.first_anchor is not None:
            kern = builder.kern
            self.pos = kern.vec(kern.scalar(r) for r in builder.grid.prefix(builder.max_stage))
        self._nodes: dict[int, tuple] = {}

    @property
    def built(self) -> int:
        return len(self.stages) - 1

    def ensure(self, k: int) -> None:
        b = self.b
        while self.built < k:
            j = self.built + 1
            if self.pos is not None:
                self.pos = b.snap(self.pos)
            band = b.locate(self.sigma, j)
            if band[0] == "anchor":
                m = band[1]
                rs = b.grid.prefix(j)
                order = sorted(range(len(rs)), key=lambda i: rs[i])
                lam = 1 if j % 2 else 2
                prof = b.family[m - 1].profile
                tg = [b.kern.scalar(profile_target(prof, rs[i], lam)) for i in order]
                x0 = [self.pos[i] for i in order]
                data = _StageData("anchor", m, tuple(rs[i] for i in order), b.kern.vec(x0), b.kern.vec(tg))
                if b.check_order:
                    _check_strict(data.x0, j, self.sigma)
            else:
                _, lo, hi = band
                if lo == 0:
                    b.slice(b.kern.one).ensure(j)
                else:
                    b.slice(lo).ensure(j)
                b.slice(hi).ensure(j)
                data = _StageData("gap", lo=lo, hi=hi, w=(self.sigma - lo) / (hi - lo))
            self.stages.append(data)
            if self.pos is not None:
                for n in range(j * j, (j + 1) ** 2):
                    xs, ys = self.nodes(n)
                    self.pos = b.kern.vec(b.kern.interp_many(self.pos, xs, ys))

    def nodes(self, n: int):
        """PL nodes ``(xs, ys)`` of F_n(., sigma)."""
        got = self._nodes.get(n)
        if got is not None:
            return got
        b = self.b
        k = stage_of_strip(n)
        if k == 0:
            return b.kern.identity
        self.ensure(k)
        data = self.stages[k]
        if data.kind == "anchor":
            out = b.kern.anchor_nodes(data.x0, data.targets, n - k * k + 1, k)
        else:
            lo_nodes = b.level_below(n) if data.lo == 0 else b.slice(data.lo).nodes(n)
            out = b.kern.blend(lo_nodes, b.slice(data.hi).nodes(n), data.w)
        if len(self._nodes) > 64:
            self._nodes.clear()
        self._nodes[n] = out
        return out


def _check_strict(x0, k, sigma):
    vals = list(x0)
    for a, c in zip(vals, vals[1:]):
        if not a <= c:
            raise InternalOrderViolation(f"anchor order lost at stage {k}, sigma = {sigma}")


# --------------------------------------------------------------------------- builder


class RisingBuilder:
    """The upper half of a normally rising map for one normalized family.

    Defines F_n for n >= 0 (strips D_0, D_1, ...), i.e. f on J x [-1/2, 1).
    """

    def __init__(self, family: IntervalFamily, grid: DenseGrid | None = None, *, exact: bool = True,
                 max_stage: int = DEFAULT_MAX_STAGE, check_order: bool = True,
                 snap_bits: int | None = DEFAULT_SNAP_BITS):
        if not len(family) or not (family[0].set.is_point and family[0].set.a == HALF):
            raise ValueError("family must be normalized (first member {1/2})")
        self.family = family
        self.grid = grid if grid is not None else DenseGrid(family.profiles)
        self.exact = exact
        self.kern = _Kernel(exact)
        self.max_stage = max_stage
        self.check_order = check_order
        self.snap_bits = snap_bits if exact else None
        self.stage = 0
        self._slices: dict = {}
        self._bands: dict[int, list] = {}
        self._lock = threading.RLock()
        self.condition_log: list[dict] = []

    def snap(self, pos):
        """Round exact positions to multiples of 2^-snap_bits, unless that merges two of them.

        Without this the tracked abscissae gain roughly a decimal digit per strip.
        """
        if self.snap_bits is None:
            return pos
        scale = 1 << self.snap_bits
        out = tuple(Fraction(round(x * scale), scale) for x in pos)
        srt = sorted(range(len(pos)), key=pos.__getitem__)
        for i, j in zip(srt, srt[1:]):
            if pos[i] < pos[j] and not out[i] < out[j]:
                return pos
        return out

    # -- band layout ------------------------------------------------------------------

    def sigma_interval(self, m: int, k: int):
        lo, hi = truncate(self.family[m - 1].set, k)
        return self.kern.scalar(2 * lo), self.kern.scalar(2 * hi)

    def bands(self, k: int) -> list[tuple]:
        """Anchor bands at stage k as sorted ``(sigma_lo, sigma_hi, member)``."""
        got = self._bands.get(k)
        if got is None:
            got = sorted(
                (*self.sigma_interval(m, k), m) for m in range(1, min(k, len(self.family)) + 1)
            )
            self._bands[k] = got
        return got

    def locate(self, sigma, k: int):
        below = self.kern.zero
        for lo, hi, m in self.bands(k):
            if sigma < lo:
                return ("gap", below, lo)
            if sigma <= hi:
                return ("anchor", m)
            below = hi
        raise DomainError(f"relative height {sigma} outside [0, 1]")

    def _first_anchor_stage(self, sigma):
        for m, mem in enumerate(self.family, start=1):
            lo, hi = self.sigma_interval(m, self.max_stage)
            if lo <= sigma <= hi:
                k = m
                while k <= self.max_stage:
                    lo, hi = self.sigma_interval(m, k)
                    if lo <= sigma <= hi:
                        return k
                    k += 1
        return None

    # -- slices -----------------------------------------------------------------------

    def slice(self, sigma) -> _Slice:
        sl = self._slices.get(sigma)
        if sl is None:
            with self._lock:
                sl = self._slices.get(sigma)
                if sl is None:
                    sl = _Slice(self, sigma)
                    self._slices[sigma] = sl
        return sl

    def level_below(self, n: int):
        """Nodes of the level map at t_{n-1}, i.e. F_{n-1}(., 1)."""
        if n - 1 <= 0:
            return self.kern.identity
        return self.slice(self.kern.one).nodes(n - 1)

    def _require(self, n: int) -> int:
        k = stage_of_strip(n)
        if k > self.max_stage:
            raise CapReached(f"strip D_{n} needs stage {k} > cap {self.max_stage}")
        if k > self.stage:
            self.advance_to(k)
        return k

    def advance_to(self, k: int) -> None:
        with self._lock:
            while self.stage < k:
                self.advance_stage()

    def advance_stage(self) -> int:
        k = self.stage + 1
        if k > self.max_stage:
            raise StageOverflow(f"stage {k} exceeds the configured cap {self.max_stage}")
        with self._lock:
            self.slice(self.kern.one).ensure(k)
            for lo, hi, _ in self.bands(k):
                self.slice(lo).ensure(k)
                self.slice(hi).ensure(k)
            self.condition_log.append(self._stage_bounds(k))
            self.stage = k
        return k

    def _stage_bounds(self, k: int) -> dict:
        worst = 0
        for lo, hi, _ in self.bands(k):
            for sg in (lo, hi):
                d = self.slice(sg).stages[k]
                diffs = [abs(t - p) for p, t in zip(d.x0, d.targets)]
                worst = max(worst, max(diffs))
        c = pull_fraction(k)
        return {
            "stage": k,
            "max_anchor_step": float(worst / c),
            "C2_bound": float(Fraction(2, 2 * k + 5)),
            "C3_bound": float(Fraction(2, 2 * k + 7)),
        }

    # -- evaluation -------------------------------------------------------------------

    def _canon(self, n: int, sigma):
        if sigma == 0 and n >= 1:
            return n - 1, self.kern.one
        return n, sigma

    def nodes(self, n: int, sigma):
        if n < 0:
            raise DomainError(f"strip {n} below the half handled by this builder")
        if not 0 <= sigma <= 1:
            raise DomainError(f"relative height {sigma} outside [0, 1]")
        n, sigma = self._canon(n, sigma)
        if n == 0:
            return self.kern.identity
        self._require(n)
        return self.slice(sigma).nodes(n)

    def forward(self, n: int, sigma, x):
        xs, ys = self.nodes(n, sigma)
        return self.kern.interp(x, xs, ys)

    def backward(self, n: int, sigma, y):
        """Inverse of F_n(., sigma)."""
        xs, ys = self.nodes(n, sigma)
        return self.kern.interp(y, ys, xs)

    def stage_data(self, sigma, k: int) -> _StageData:
        sl = self.slice(sigma)
        sl.ensure(k)
        return sl.stages[k]


# --------------------------------------------------------------------------- full square map


@dataclass(frozen=True)
class StripPoint:
    """A square point; ``edge`` = +1/-1 for the top/bottom edge, else strip coordinates."""

    r: object
    n: int = 0
    sigma: object = 0
    edge: int = 0

    @property
    def s(self):
        if self.edge:
            return type(self.r)(self.edge) if is_exact(self.r) else float(self.edge)
        return from_strip(self.n, self.sigma)

    @property
    def gap(self) -> float:
        """Distance to the horizontal edge the orbit heads for (top if n >= 1)."""
        if self.edge:
            return 0.0
        return pl1d.edge_gap(self.n, self.sigma)

    @property
    def top_gap(self) -> float:
        if self.edge:
            return 0.0 if self.edge == 1 else 2.0
        if self.n >= 1:
            return pl1d.edge_gap(self.n, self.sigma)
        return 1.0 - float(self.s)

    @property
    def bottom_gap(self) -> float:
        if self.edge:
            return 0.0 if self.edge == -1 else 2.0
        if self.n <= 0:
            return pl1d.edge_gap(self.n, self.sigma)
        return 1.0 + float(self.s)

    def as_tuple(self):
        return (self.r, self.s)


def reflect_alpha_family(alpha: IntervalFamily) -> IntervalFamily:
    """W_j -> {1/2 - s : s in W_j}; a level 0 is replaced by its image level 1/2."""
    out = []
    for mem in alpha:
        v = mem.set
        a, b = HALF - v.b, HALF - v.a
        lc, rc = v.right_closed, v.left_closed
        prof = mem.profile
        if a == 0 and lc:
            out.append(Member(mem.id, Interval.point(HALF), prof))
            if b > 0:
                out.append(Member(mem.id, Interval(a, b, False, rc), prof))
        else:
            out.append(Member(mem.id, Interval(a, b, lc, rc), prof))
    fam = IntervalFamily(tuple(out), "alpha")
    ms = fam.members
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            if ms[i].set.intersects(ms[j].set):
                raise ReflectionCollision(
                    f"reflected members {ms[i].id} and {ms[j].id} collide; adjust the alpha family"
                )
    return fam


def build_mirror(alpha_family: IntervalFamily, *, exact: bool = True, max_stage: int = DEFAULT_MAX_STAGE,
                 check_order: bool = True, snap_bits: int | None = DEFAULT_SNAP_BITS) -> RisingBuilder:
    """Builder g~ whose inverse, conjugated by the vertical reflection, is f below D_0."""
    fam = reflect_alpha_family(alpha_family)
    fam, _ = normalize_family(fam)
    return RisingBuilder(fam, exact=exact, max_stage=max_stage, check_order=check_order, snap_bits=snap_bits)


class BuiltSquareMap:
    """Normally rising homeomorphism f of J^2 assembled from an upper and a mirrored builder."""

    def __init__(self, upper: RisingBuilder, lower: RisingBuilder, omega_family=None, alpha_family=None):
        if upper.exact != lower.exact:
            raise ValueError("both halves must use the same arithmetic mode")
        self.upper = upper
        self.lower = lower
        self.exact = upper.exact
        self.omega_family = omega_family if omega_family is not None else upper.family
        self.alpha_family = alpha_family

    @property
    def stage(self) -> int:
        return min(self.upper.stage, self.lower.stage)

    @property
    def max_stage(self) -> int:
        return self.upper.max_stage

    def scalar(self, v):
        return as_scalar(v, self.exact)

    # strip-coordinate dynamics ----------------------------------------------------------

    def point(self, p) -> StripPoint:
        r, s = (self.scalar(p[0]), self.scalar(p[1]))
        if not (-1 <= r <= 1 and -1 <= s <= 1):
            raise DomainError(f"point {p} outside the square")
        if s == 1 or s == -1:
            return StripPoint(r, edge=int(s))
        n, sigma = to_strip(s)
        return StripPoint(r, n, sigma)

    def step(self, pt: StripPoint) -> StripPoint:
        if pt.edge:
            return pt
        if pt.n >= 0:
            return StripPoint(self.upper.forward(pt.n, pt.sigma, pt.r), pt.n + 1, pt.sigma)
        m, sg = 1 - pt.n, 1 - pt.sigma
        return StripPoint(self.lower.backward(m - 1, sg, pt.r), pt.n + 1, pt.sigma)

    def step_back(self, pt: StripPoint) -> StripPoint:
        if pt.edge:
            return pt
        if pt.n >= 1:
            return StripPoint(self.upper.backward(pt.n - 1, pt.sigma, pt.r), pt.n - 1, pt.sigma)
        m, sg = 1 - pt.n, 1 - pt.sigma
        return StripPoint(self.lower.forward(m, sg, pt.r), pt.n - 1, pt.sigma)

    # dynamics protocol used by the limits module ---------------------------------------

    lift = point

    def coords(self, pt: StripPoint):
        return pt.as_tuple()

    def strip(self, pt: StripPoint):
        return None if pt.edge else pt.n

    def top_gap(self, pt: StripPoint) -> float:
        return pt.top_gap

    def bottom_gap(self, pt: StripPoint) -> float:
        return pt.bottom_gap

    def is_fixed(self, pt: StripPoint) -> bool:
        return bool(pt.edge)

    # public point API -----------------------------------------------------------------

    def eval(self, p):
        return self.step(self.point(p)).as_tuple()

    def eval_inverse(self, p):
        return self.step_back(self.point(p)).as_tuple()

    def advance_stage(self) -> int:
        self.upper.advance_stage()
        self.lower.advance_stage()
        return self.stage

    def advance_to(self, k: int) -> None:
        self.upper.advance_to(k)
        self.lower.advance_to(k)

    # serialization --------------------------------------------------------------------

    def band_table(self, k: int) -> list[dict]:
        """Bands of stage k on the upper half, with anchor abscissae at band edges."""
        rows = []
        below = 0
        for lo, hi, m in self.upper.bands(k):
            if lo > below:
                rows.append({"kind": "gap", "sigma": [str(below), str(lo)]})
            arcs = {}
            for sg in (lo, hi):
                d = self.upper.stage_data(sg, k)
                arcs[str(sg)] = [str(x) for x in d.x0]
            rows.append({
                "kind": "anchor",
                "member": m,
                "sigma": [str(lo), str(hi)],
                "grid": [str(r) for r in self.upper.stage_data(lo, k).rs],
                "x0": arcs,
            })
            below = hi
        return rows

    def to_dict(self) -> dict:
        from .config import family_to_dict

        return {
            "format": "rising-orbits/built-map",
            "version": FORMAT_VERSION,
            "mode": "exact" if self.exact else "float",
            "stage": self.stage,
            "max_stage": self.max_stage,
            "omega_family": family_to_dict(self.omega_family),
            "alpha_family": family_to_dict(self.alpha_family) if self.alpha_family is not None else None,
            "bands": [{"stage": k, "bands": self.band_table(k)} for k in range(1, self.stage + 1)],
        }

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path) -> "BuiltSquareMap":
        from .config import family_from_dict

        with open(path) as fh:
            d = json.load(fh)
        if d.get("format") != "rising-orbits/built-map" or d.get("version") != FORMAT_VERSION:
            raise ValueError(f"{path}: not a version {FORMAT_VERSION} built-map file")
        om = family_from_dict(d["omega_family"], "omega")
        al = family_from_dict(d["alpha_family"], "alpha") if d["alpha_family"] else None
        m = init(om, al, exact=d["mode"] == "exact", max_stage=d["max_stage"])
        m.advance_to(d["stage"])
        if m.to_dict()["bands"] != d["bands"]:
            raise ValueError(f"{path}: stored bands disagree with the rebuilt map")
        return m


def init(omega_family: IntervalFamily, alpha_family: IntervalFamily | None = None, grid: DenseGrid | None = None,
         *, exact: bool = True, max_stage: int = DEFAULT_MAX_STAGE, check_order: bool | None = None,
         snap_bits: int | None = DEFAULT_SNAP_BITS) -> BuiltSquareMap:
    """Stage-0 map (f02 on D_0) for validated families; later stages are built on demand."""
    from .profiles import IntervalFamily as _IF

    if check_order is None:
        check_order = exact
    om, _ = normalize_family(omega_family)
    al = alpha_family if alpha_family is not None else _IF((), "alpha")
    upper = RisingBuilder(om, grid, exact=exact, max_stage=max_stage, check_order=check_order, snap_bits=snap_bits)
    lower = build_mirror(al, exact=exact, max_stage=max_stage, check_order=check_order, snap_bits=snap_bits)
    return BuiltSquareMap(upper, lower, om, al)


def advance_stage(m: BuiltSquareMap) -> BuiltSquareMap:
    m.advance_stage()
    return m


def eval(m: BuiltSquareMap, p):  # noqa: A001 - mirrors the operation name
    return m.eval(p)


def eval_inverse(m: BuiltSquareMap, p):
    return m.eval_inverse(p)


# --------------------------------------------------------------------------- conditions


@dataclass
class ConditionReport:
    stage: int
    blocks: list[dict] = field(default_factory=list)
    levels: list[dict] = field(default_factory=list)
    ordinate_violations: int = 0

    @property
    def violations(self) -> int:
        return (
            sum(1 for b in self.blocks if not b["ok"])
            + sum(1 for lv in self.levels if not lv["ok"])
            + self.ordinate_violations
        )

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "blocks": self.blocks,
            "levels": self.levels,
            "ordinate_violations": self.ordinate_violations,
            "violations": self.violations,
        }


def _sample_sigmas(n: int, exact: bool):
    # fixed offsets keep samples off the band edges of typical families
    vals = [Fraction(2 * i + 1, 2 * n) for i in range(n)]
    return vals if exact else [float(v) for v in vals]


def check_conditions(m: BuiltSquareMap | RisingBuilder, k: int, samples: int = 64) -> ConditionReport:
    """Sample |p f(r, s) - r| block by block after stage k (upper half).

    Block m (1 <= m <= k+1) is D_{(m-1)^2} .. D_{m^2-1} with strict bound 2/(2m+3);
    the level t_{j^2-1} (1 <= j <= k+1) has strict bound 2/(2j+5).
    """
    b = m.upper if isinstance(m, BuiltSquareMap) else m
    b.advance_to(k)
    kern = b.kern
    rs = [kern.scalar(Fraction(2 * i + 1, samples) - 1) for i in range(samples)]
    sigmas = _sample_sigmas(samples, b.exact)
    rep = ConditionReport(stage=k)
    for blk in range(1, k + 2):
        strips = list(range((blk - 1) ** 2, blk * blk))
        bound = Fraction(2, 2 * blk + 3)
        worst = 0
        for idx, sg in enumerate(sigmas):
            n = strips[idx % len(strips)]
            xs, ys = b.nodes(n, sg)
            imgs = kern.interp_many(rs, xs, ys)
            worst = max(worst, max(abs(y - r) for y, r in zip(imgs, rs)))
            if n >= 1:
                s = from_strip(n, sg)
                if from_strip(n + 1, sg) != pl1d.f01(s) and (b.exact or abs(from_strip(n + 1, sg) - pl1d.f01(s)) > 1e-15):
                    rep.ordinate_violations += 1
        rep.blocks.append({
            "m": blk,
            "strips": [strips[0], strips[-1]],
            "bound": str(bound),
            "max_displacement": float(worst),
            "ok": worst < bound,
        })
    for j in range(1, k + 2):
        n = j * j - 1
        bound = Fraction(2, 2 * j + 5)
        xs, ys = b.nodes(n, kern.one) if n >= 1 else kern.identity
        imgs = kern.interp_many(rs, xs, ys)
        worst = max(abs(y - r) for y, r in zip(imgs, rs))
        rep.levels.append({"j": j, "level_index": n, "bound": str(bound), "max_displacement": float(worst),
                           "ok": worst < bound})
    return rep
