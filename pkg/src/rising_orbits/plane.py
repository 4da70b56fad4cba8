"""From the six-points square map to a plane homeomorphism with a "bad" disk.

Pipeline: the six-points map f on J^2, the PL quotient xi collapsing four edge
segments onto slits, g = xi f xi^-1, the tangent chart psi of the open square
onto the plane, and a radial map zeta carrying G = psi(F) onto a star-shaped
disk E.  The plane map is h = zeta psi g psi^-1 zeta^-1.

Orbits of g are computed through the semi-conjugacy: g^n(xi(x)) = xi(f^n(x)),
so only f is ever iterated and near-edge precision is kept in strip
coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .builder import DEFAULT_MAX_STAGE, BuiltSquareMap, StripPoint, init
from .errors import DomainError, InvalidDisk, NotInImage, Overflow
from .limits import ClassifyParams, SquareClassification, classify_square_orbit
from .pl1d import as_scalar, is_exact
from .profiles import Envelope, Interval, IntervalFamily, Member, make_profile

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
DELTA_TAN = 1e-12
SLIT_TOL = 1e-12


# --------------------------------------------------------------------------- the six points


def _pt(r, s):
    return (Fraction(r), Fraction(s))


@dataclass(frozen=True)
class SixPointsConfig:
    K: tuple = (THIRD, HALF)
    u: tuple = (_pt(-HALF, 1), _pt(0, 1), _pt(HALF, 1), _pt(-HALF, -1), _pt(0, -1), _pt(HALF, -1))
    v: tuple = (_pt(-1, 1), _pt(1, 1), _pt(-1, -1), _pt(1, -1))
    w: tuple = tuple(_pt(Fraction(a, 4), b) for b in (1, -1) for a in (-3, -1, 1, 3))
    x: tuple = tuple(_pt(a, b) for b in (Fraction(3, 4), Fraction(-3, 4)) for a in (-HALF, 0, HALF))

    def in_F(self, p) -> bool:
        r, s = p
        return -HALF <= r <= HALF and self.K[0] <= s <= self.K[1]

    def region(self, p) -> str:
        """'L1', 'L2', 'interior' or 'outside' for a point relative to F."""
        r, s = p
        if not self.in_F(p):
            return "outside"
        if r == -HALF and self.K[0] < s < self.K[1]:
            return "L1"
        if r in (-HALF, HALF) or s in self.K:
            return "L2"
        return "interior"


SIX = SixPointsConfig()


def six_points_families():
    """omega and alpha families of the six-points construction."""
    h = HALF
    flat = Envelope.from_table([(-1, -1), (-h, h), (h, h), (1, 1)])
    step = Envelope.from_table([(-1, -1), (-h, -h, -h, 0), (h, 0, h, h), (1, 1)])
    sets = (Interval.point(THIRD), Interval.open(THIRD, h), Interval.point(h))

    def fam(side):
        p_flat, p_step = make_profile(flat, flat, side), make_profile(step, step, side)
        return IntervalFamily(
            (Member(1, sets[0], p_flat), Member(2, sets[1], p_step), Member(3, sets[2], p_flat)), side
        )

    return fam("omega"), fam("alpha")


def build_six_points(*, exact: bool = False, max_stage: int = DEFAULT_MAX_STAGE, **kw) -> BuiltSquareMap:
    om, al = six_points_families()
    return init(om, al, exact=exact, max_stage=max_stage, **kw)


# --------------------------------------------------------------------------- quotient map xi


@dataclass(frozen=True)
class _Tri:
    src: tuple  # three (r, e) vertices, e = 1 - s
    dst: tuple
    fwd: tuple  # (a, b, c, d, e, f): r' = a r + b e + c, e' = d r + e e + f
    inv: tuple

    def contains(self, r, e, tol=0.0, image=False) -> bool:
        (x1, y1), (x2, y2), (x3, y3) = self.dst if image else self.src
        d = (y2 - y3) * (x1 - x3) + (x3 - x2) * (y1 - y3)
        l1 = ((y2 - y3) * (r - x3) + (x3 - x2) * (e - y3)) / d
        l2 = ((y3 - y1) * (r - x3) + (x1 - x3) * (e - y3)) / d
        l3 = 1 - l1 - l2
        return l1 >= -tol and l2 >= -tol and l3 >= -tol


def _affine(src, dst):
    """Coefficients of the affine map taking the src triangle onto dst (exact)."""
    (x1, y1), (x2, y2), (x3, y3) = src
    det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    if det == 0:
        raise ValueError("degenerate triangle")
    out = []
    for k in (0, 1):
        v1, v2, v3 = dst[0][k], dst[1][k], dst[2][k]
        a = ((v2 - v1) * (y3 - y1) - (v3 - v1) * (y2 - y1)) / det
        b = ((x2 - x1) * (v3 - v1) - (x3 - x1) * (v2 - v1)) / det
        out.append((a, b, v1 - a * x1 - b * y1))
    return out[0] + out[1]


def _signed_area(tri) -> Fraction:
    (x1, y1), (x2, y2), (x3, y3) = tri
    return ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)) / 2


class QuotientMap:
    """PL quotient xi on J^2, exact on Fractions and careful near the edges on floats.

    Only the quadrant [0, 1] x [1/2, 1] is tabulated, in coordinates (r, e = 1 - s);
    the rest follows from the two reflections and the identity on |s| <= 1/2.
    """

    def __init__(self):
        f = Fraction
        P, Q = (f(1, 4), f(1, 4)), (f(3, 4), f(1, 4))
        A, B, C, D, E = ((f(i, 4), f(0)) for i in range(5))
        G, F_, H = (f(1, 2), f(1, 2)), (f(0), f(1, 2)), (f(1), f(1, 2))
        x3 = (f(1, 2), f(1, 4))
        image = {P: P, Q: Q, A: A, B: C, C: x3, D: C, E: E, G: G, F_: F_, H: H}
        fans = [
            (P, [(A, B), (B, C), (C, G), (G, F_), (F_, A)]),
            (Q, [(C, D), (D, E), (E, H), (H, G), (G, C)]),
        ]
        tris = []
        for centre, edges in fans:
            for a, b in edges:
                src = (centre, a, b)
                dst = tuple(image[p] for p in src)
                if _signed_area(src) == 0 or _signed_area(dst) == 0:
                    raise ValueError("degenerate fan triangle")
                if (_signed_area(src) > 0) != (_signed_area(dst) > 0):
                    raise ValueError("fan triangle flips orientation")
                tris.append(_Tri(src, dst, _affine(src, dst), _affine(dst, src)))
        self.triangles = tuple(tris)
        self._float = tuple(
            _Tri(
                tuple(tuple(map(float, v)) for v in t.src),
                tuple(tuple(map(float, v)) for v in t.dst),
                tuple(map(float, t.fwd)),
                tuple(map(float, t.inv)),
            )
            for t in tris
        )

    def _tris(self, exact: bool):
        return self.triangles if exact else self._float

    # quadrant kernels in (r, e) coordinates, r in [0, 1], e in [0, 1/2]

    def _fwd_q(self, r, e):
        exact = is_exact(r) and is_exact(e)
        tol = 0 if exact else 1e-12
        for t in self._tris(exact):
            if t.contains(r, e, tol):
                a, b, c, d, e2, f = t.fwd
                return a * r + b * e + c, d * r + e2 * e + f
        raise DomainError(f"no fan triangle contains (r, e) = ({r}, {e})")

    def _inv_q(self, r, e, tol):
        exact = is_exact(r) and is_exact(e)
        out = []
        for t in self._tris(exact):
            if t.contains(r, e, tol, image=True):
                a, b, c, d, e2, f = t.inv
                p = (a * r + b * e + c, d * r + e2 * e + f)
                if exact:
                    p = (p[0], max(p[1], 0 * p[1]))
                else:
                    p = (min(max(p[0], 0.0), 1.0), min(max(p[1], 0.0), 0.5))
                if all(_far(p, q, tol) for q in out):
                    out.append(p)
        if not out:
            raise NotInImage(f"(r, e) = ({r}, {e}) is not in the quotient image")
        return out

    # public API

    def eval_gap(self, r, s, e=None):
        """xi(r, s); ``e`` is an accurate 1 - |s| for |s| > 1/2.  Returns (r', s', e')."""
        if not (-1 <= r <= 1 and -1 <= s <= 1):
            raise DomainError(f"({r}, {s}) outside the square")
        if abs(s) <= HALF:
            return r, s, 1 - abs(s)
        if e is None:
            e = 1 - abs(s)
        sr = -1 if r < 0 else 1
        ss = -1 if s < 0 else 1
        r2, e2 = self._fwd_q(sr * r, e)
        return sr * r2, ss * (1 - e2), e2

    def __call__(self, p):
        r, s, _ = self.eval_gap(*p)
        return (r, s)

    def invert(self, p, tol: float = SLIT_TOL) -> list:
        r, s = p
        if not (-1 <= r <= 1 and -1 <= s <= 1):
            raise DomainError(f"({r}, {s}) outside the square")
        if abs(s) <= HALF:
            return [(r, s)]
        sr = -1 if r < 0 else 1
        ss = -1 if s < 0 else 1
        tol = 0 if is_exact(r) and is_exact(s) else tol
        pre = self._inv_q(sr * r, 1 - abs(s), tol)
        return [(sr * a, ss * (1 - b)) for a, b in pre]


def _far(p, q, tol) -> bool:
    return abs(p[0] - q[0]) > tol or abs(p[1] - q[1]) > tol


QUOTIENT = QuotientMap()


def quotient_eval(q: QuotientMap, p):
    return q(p)


def quotient_invert(q: QuotientMap, p, tol: float = SLIT_TOL) -> list:
    return q.invert(p, tol)


def on_slit(p, tol: float = 0.0) -> bool:
    """True on the four slits from u1, u3, u4, u6 to x1, x3, x4, x6 (endpoints included)."""
    r, s = p
    return abs(abs(r) - HALF) <= tol and Fraction(3, 4) - tol <= abs(s) <= 1 + tol


def on_slit_interior(p) -> bool:
    r, s = p
    return abs(r) == HALF and Fraction(3, 4) < abs(Fraction(s) if isinstance(s, float) else s) < 1


# --------------------------------------------------------------------------- g = xi f xi^-1


@dataclass(frozen=True)
class GState:
    f: StripPoint


class SixPointsMap:
    """g = xi f xi^-1 as a dynamics object (see :mod:`rising_orbits.limits`)."""

    def __init__(self, f: BuiltSquareMap, q: QuotientMap = QUOTIENT):
        self.f = f
        self.q = q

    def lift(self, p):
        pre = self.q.invert(tuple(as_scalar(c, self.f.exact) for c in p))
        return GState(self.f.point(pre[0]))

    def step(self, st: GState) -> GState:
        return GState(self.f.step(st.f))

    def step_back(self, st: GState) -> GState:
        return GState(self.f.step_back(st.f))

    def _xi(self, st: GState):
        pt = st.f
        r, s = pt.as_tuple()
        e = None
        if not pt.edge and abs(s) > HALF:
            e = pt.top_gap if s > 0 else pt.bottom_gap
            if self.f.exact:
                e = 1 - abs(s)
        return self.q.eval_gap(r, s, e)

    def coords(self, st: GState):
        r, s, _ = self._xi(st)
        return r, s

    def strip(self, st: GState):
        return self.f.strip(st.f)

    def top_gap(self, st: GState) -> float:
        r, s, e = self._xi(st)
        return float(e) if s > HALF else float(1 - s)

    def bottom_gap(self, st: GState) -> float:
        r, s, e = self._xi(st)
        return float(e) if s < -HALF else float(1 + s)

    def is_fixed(self, st: GState) -> bool:
        return self.f.is_fixed(st.f)

    def __call__(self, p, direction: str = "forward"):
        st = self.lift(p)
        st = self.step(st) if direction == "forward" else self.step_back(st)
        return self.coords(st)


def six_points_map(pipeline, p, direction: str = "forward"):
    g = pipeline.g if isinstance(pipeline, PlanePipeline) else pipeline
    return g(p, direction)


# --------------------------------------------------------------------------- tangent chart psi


def tangent_eval(p, delta: float = DELTA_TAN, gaps: tuple | None = None):
    """psi(r, s) = (tan(pi r / 2), tan(pi s / 2)); ``gaps`` are accurate 1 - |r|, 1 - |s|."""
    out = []
    for i, c in enumerate(p):
        c = float(c)
        g = float(gaps[i]) if gaps is not None and gaps[i] is not None else 1.0 - abs(c)
        if g < delta:
            raise Overflow(f"coordinate within {delta} of the square edge")
        if g < 0.25:
            out.append(math.copysign(1.0 / math.tan(math.pi * g / 2), c))
        else:
            out.append(math.tan(math.pi * c / 2))
    return tuple(out)


def tangent_invert(y):
    """psi^-1; returns ``((r, s), (gap_r, gap_s))`` with accurate distances to the edges."""
    pts, gaps = [], []
    for c in y:
        c = float(c)
        if not math.isfinite(c):
            raise DomainError("plane coordinates must be finite")
        pts.append(2 / math.pi * math.atan(c))
        gaps.append(2 / math.pi * math.atan(1 / abs(c)) if c else 1.0)
    return tuple(pts), tuple(gaps)


# --------------------------------------------------------------------------- disks and zeta

SQRT3_3 = math.sqrt(3) / 3


@dataclass(frozen=True)
class DiskSpec:
    kind: str  # rectangle | ellipse | star-polygon
    center: tuple = (0.0, 0.0)
    half_widths: tuple | None = None  # rectangle (a, b)
    semi_axes: tuple | None = None  # ellipse (a, b)
    vertices: tuple | None = None  # star polygon, counter-clockwise

    def __post_init__(self):
        validate_disk(self)

    @classmethod
    def unit_disk(cls) -> "DiskSpec":
        return cls("ellipse", (0.0, 0.0), semi_axes=(1.0, 1.0))

    def radius(self, theta: float) -> float:
        """Radial function rho(theta) about the centre."""
        c, s = math.cos(theta), math.sin(theta)
        if self.kind == "rectangle":
            a, b = self.half_widths
            return min(a / abs(c) if c else math.inf, b / abs(s) if s else math.inf)
        if self.kind == "ellipse":
            a, b = self.semi_axes
            return 1.0 / math.sqrt((c / a) ** 2 + (s / b) ** 2)
        cx, cy = self.center
        best = math.inf
        vs = self.vertices
        for (x1, y1), (x2, y2) in zip(vs, vs[1:] + vs[:1]):
            ex, ey = x2 - x1, y2 - y1
            den = c * ey - s * ex
            if den == 0:
                continue
            px, py = x1 - cx, y1 - cy
            t = (px * ey - py * ex) / den
            u = (px * s - py * c) / den
            if t > 0 and -1e-12 <= u <= 1 + 1e-12:
                best = min(best, t)
        return best

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "center": list(self.center)}
        for k in ("half_widths", "semi_axes", "vertices"):
            v = getattr(self, k)
            if v is not None:
                d[k] = [list(x) for x in v] if k == "vertices" else list(v)
        return d


def validate_disk(spec: DiskSpec) -> None:
    if spec.kind == "rectangle":
        if not spec.half_widths or min(spec.half_widths) <= 0:
            raise InvalidDisk("rectangle needs positive half widths")
    elif spec.kind == "ellipse":
        if not spec.semi_axes or min(spec.semi_axes) <= 0:
            raise InvalidDisk("ellipse needs positive semi-axes")
    elif spec.kind == "star-polygon":
        vs = spec.vertices
        if not vs or len(vs) < 3:
            raise InvalidDisk("star polygon needs at least three vertices")
        cx, cy = spec.center
        turn = 0.0
        for (x1, y1), (x2, y2) in zip(vs, vs[1:] + vs[:1]):
            a, b = (x1 - cx, y1 - cy), (x2 - cx, y2 - cy)
            cross = a[0] * b[1] - a[1] * b[0]
            if cross <= 0:
                raise InvalidDisk("polygon is not star-shaped about its centre (or not counter-clockwise)")
            turn += math.atan2(cross, a[0] * b[0] + a[1] * b[1])
        if abs(turn - 2 * math.pi) > 1e-9:
            raise InvalidDisk("polygon must wind exactly once around its centre")
    else:
        raise InvalidDisk(f"unknown disk kind {spec.kind!r}")


G_RECT = DiskSpec("rectangle", (0.0, (1 + SQRT3_3) / 2), half_widths=(1.0, (1 - SQRT3_3) / 2))


def disk_conjugacy(spec: DiskSpec, p, direction: str = "forward", source: DiskSpec = G_RECT):
    """Radial homeomorphism of the plane taking ``source`` (G) onto ``spec`` (E)."""
    if direction == "forward":
        a, b = source, spec
    elif direction == "backward":
        a, b = spec, source
    else:
        raise ValueError(f"unknown direction {direction!r}")
    vx, vy = float(p[0]) - a.center[0], float(p[1]) - a.center[1]
    rad = math.hypot(vx, vy)
    if rad == 0:
        return tuple(b.center)
    th = math.atan2(vy, vx)
    ra, rb = a.radius(th), b.radius(th)
    new = rad * rb / ra if rad <= ra else rb + (rad - ra)
    return (b.center[0] + new * vx / rad, b.center[1] + new * vy / rad)


# --------------------------------------------------------------------------- the plane map


@dataclass
class PlaneClassification:
    kind: str  # bounded | positively-divergent | negatively-divergent | doubly-divergent | undetermined
    forward: SquareClassification
    backward: SquareClassification
    omega: tuple | None = None  # plane limit points
    alpha: tuple | None = None
    square_point: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "forward": self.forward.to_dict(),
            "backward": self.backward.to_dict(),
            "omega": None if self.omega is None else [float(v) for v in self.omega],
            "alpha": None if self.alpha is None else [float(v) for v in self.alpha],
            "square_point": None if self.square_point is None else [float(v) for v in self.square_point],
        }


class PlanePipeline:
    def __init__(self, f: BuiltSquareMap | None = None, disk: DiskSpec | None = None, q: QuotientMap = QUOTIENT):
        self.f = f if f is not None else build_six_points()
        self.q = q
        self.g = SixPointsMap(self.f, q)
        self.disk = disk if disk is not None else DiskSpec.unit_disk()
        self.G = G_RECT

    # charts

    def to_plane(self, p, gaps: tuple | None = None):
        """zeta psi on a square point."""
        return disk_conjugacy(self.disk, tangent_eval(p, gaps=gaps))

    def to_square(self, y):
        """psi^-1 zeta^-1 on a plane point; returns the square point and its edge gaps."""
        return tangent_invert(disk_conjugacy(self.disk, y, "backward"))

    def state_to_plane(self, st: GState):
        r, s = self.g.coords(st)
        return self.to_plane((r, s), gaps=(1 - abs(float(r)), min(self.g.top_gap(st), self.g.bottom_gap(st))))

    def __call__(self, y, direction: str = "forward"):
        return plane_map(self, y, direction)


def plane_map(pipeline: PlanePipeline, y, direction: str = "forward"):
    """h(y) or h^-1(y).  Raises Overflow (with ``square_point``) when the image leaves float range."""
    (r, s), _ = pipeline.to_square(y)
    g = pipeline.g
    st = g.lift((r, s))
    st = g.step(st) if direction == "forward" else g.step_back(st)
    try:
        return pipeline.state_to_plane(st)
    except Overflow as exc:
        exc.square_point = g.coords(st)
        raise


def classify_plane_orbit(pipeline: PlanePipeline, y, params: ClassifyParams | None = None,
                         square_point=None) -> PlaneClassification:
    """Classify the h-orbit of y via forward and backward g-orbits in the square.

    ``square_point`` may be given instead of y to skip the float round trip through
    the charts (useful for points whose plane image is huge).
    """
    params = params or ClassifyParams()
    x = square_point if square_point is not None else pipeline.to_square(y)[0]
    fw = classify_square_orbit(pipeline.g, x, ClassifyParams(params.delta_edge, params.delta_cauchy,
                                                             params.stage_budget, "forward"))
    bw = classify_square_orbit(pipeline.g, x, ClassifyParams(params.delta_edge, params.delta_cauchy,
                                                             params.stage_budget, "backward"))
    out = PlaneClassification("undetermined", fw, bw, square_point=tuple(x))
    if fw.kind == "fixed" or bw.kind == "fixed":
        out.kind = "bounded"
        if not on_slit(x, SLIT_TOL) and abs(float(x[1])) == 1:
            out.kind = "undetermined"  # edge points have no plane image
        else:
            out.omega = out.alpha = pipeline.to_plane(x)
        return out
    pos_div = fw.kind == "top-edge-limit"
    neg_div = bw.kind == "bottom-edge-limit"
    if fw.kind == "interior-limit":
        out.omega = pipeline.to_plane(fw.point)
    if bw.kind == "interior-limit":
        out.alpha = pipeline.to_plane(bw.point)
    if pos_div and neg_div:
        out.kind = "doubly-divergent"
    elif pos_div and bw.kind == "interior-limit":
        out.kind = "positively-divergent"
    elif neg_div and fw.kind == "interior-limit":
        out.kind = "negatively-divergent"
    elif fw.kind == "interior-limit" and bw.kind == "interior-limit":
        out.kind = "bounded"
    return out
