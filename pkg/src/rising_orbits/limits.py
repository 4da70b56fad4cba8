"""Orbits, limit-set estimates and orbit classification for square maps.

Any object with the small "dynamics" interface below can be iterated here:
:class:`~rising_orbits.builder.BuiltSquareMap` and the six-points map of
:mod:`rising_orbits.plane` both provide it.

``lift(p)``            internal state for the square point p
``step / step_back``   one forward / backward iterate of a state
``coords(state)``      the square point (r, s) of a state
``strip(state)``       strip index of the underlying normally rising orbit, None on J x dJ
``top_gap``, ``bottom_gap``  float distance of the point to s = 1 / s = -1
``is_fixed(state)``    True for states on the horizontal edges, which never move
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Literal, Protocol

from .errors import CapReached, DomainError

Direction = Literal["forward", "backward"]

DELTA_EDGE = 1e-3
DELTA_CAUCHY = 1e-4
STAGE_BUDGET = 30


class Dynamics(Protocol):
    def lift(self, p): ...
    def step(self, state): ...
    def step_back(self, state): ...
    def coords(self, state): ...
    def strip(self, state) -> int | None: ...
    def top_gap(self, state) -> float: ...
    def bottom_gap(self, state) -> float: ...
    def is_fixed(self, state) -> bool: ...


def residual_bound(k: int) -> Fraction:
    """Distance an orbit may still sit from its targets after stage block k."""
    return Fraction(12, 2 * k + 7)


class MirroredInverse:
    """Psi_v f^-1 Psi_v, again normally rising; its omega data is the alpha data of f."""

    def __init__(self, base: Dynamics):
        self.base = base

    def lift(self, p):
        return self.base.lift((p[0], -p[1]))

    def step(self, state):
        return self.base.step_back(state)

    def step_back(self, state):
        return self.base.step(state)

    def coords(self, state):
        r, s = self.base.coords(state)
        return r, -s

    def strip(self, state):
        n = self.base.strip(state)
        return None if n is None else 1 - n

    def top_gap(self, state) -> float:
        return self.base.bottom_gap(state)

    def bottom_gap(self, state) -> float:
        return self.base.top_gap(state)

    def is_fixed(self, state) -> bool:
        return self.base.is_fixed(state)


# --------------------------------------------------------------------------- orbits


@dataclass
class OrbitRecord:
    start: tuple
    direction: Direction
    points: list = field(default_factory=list)  # (r, s)
    strips: list = field(default_factory=list)
    status: str = "completed"

    def __len__(self) -> int:
        return len(self.points)

    def rows(self):
        for i, ((r, s), n) in enumerate(zip(self.points, self.strips)):
            yield {"step": i if self.direction == "forward" else -i, "r": r, "s": s, "strip": n}

    def to_csv(self, extra: dict | None = None) -> str:
        """CSV with columns step, r, s, strip plus any ``extra`` per-row columns."""
        buf = io.StringIO()
        names = ["step", "r", "s", "strip", *(extra or {})]
        w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        w.writeheader()
        for i, row in enumerate(self.rows()):
            row = {k: _fmt(v) for k, v in row.items()}
            for k, col in (extra or {}).items():
                row[k] = _fmt(col[i])
            w.writerow(row)
        return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def orbit(dyn: Dynamics, start, steps: int, direction: Direction = "forward") -> OrbitRecord:
    if steps < 0:
        raise DomainError("steps must be non-negative")
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    st = dyn.lift(start)
    adv = dyn.step if direction == "forward" else dyn.step_back
    rec = OrbitRecord(tuple(start), direction)
    rec.points.append(dyn.coords(st))
    rec.strips.append(dyn.strip(st))
    for _ in range(steps):
        try:
            st = adv(st)
        except CapReached:
            rec.status = "cap-reached"
            break
        rec.points.append(dyn.coords(st))
        rec.strips.append(dyn.strip(st))
    return rec


def block_end_samples(dyn: Dynamics, start, stage_budget: int):
    """Orbit states when the orbit enters strip (k+1)^2, for k = 1 .. stage_budget.

    Returns ``(samples, k_last, status)``; samples are ``(k, state)`` pairs.
    """
    st = dyn.lift(start)
    out = []
    n = dyn.strip(st)
    k = 1
    status = "completed"
    while k <= stage_budget:
        target = (k + 1) ** 2
        if n > target:
            k += 1
            continue
        try:
            while n < target:
                st = dyn.step(st)
                n = dyn.strip(st)
        except CapReached:
            status = "cap-reached"
            break
        out.append((k, st))
        k += 1
    k_last = out[-1][0] if out else 0
    return out, k_last, status


# --------------------------------------------------------------------------- estimates


@dataclass
class LimitEstimate:
    edge: str  # "top" | "bottom"
    lo: object
    hi: object
    residual: object
    samples: int
    status: str = "completed"
    ordinate: tuple | None = None  # [s_lo, s_hi] when the limit is not on an edge

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("estimate interval reversed")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x, tol=0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def distance_to(self, x) -> float:
        return float(max(self.lo - x, x - self.hi, 0))

    def to_dict(self) -> dict:
        d = {
            "edge": self.edge,
            "interval": [_num(self.lo), _num(self.hi)],
            "residual": _num(self.residual),
            "samples": self.samples,
            "status": self.status,
        }
        if self.ordinate is not None:
            d["ordinate"] = [_num(v) for v in self.ordinate]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _num(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    return float(v)


def _estimate(dyn: Dynamics, start, stage_budget: int, edge: str) -> LimitEstimate:
    st = dyn.lift(start)
    r, s = dyn.coords(st)
    if dyn.is_fixed(st) or dyn.strip(st) is None or abs(r) == 1:
        return LimitEstimate(edge, r, r, 0, 0)
    samples, k_last, status = block_end_samples(dyn, start, stage_budget)
    if not samples:
        raise CapReached("no stage block completed before the cap")
    tail = samples[len(samples) - max(1, len(samples) // 4):]
    pts = [dyn.coords(s_) for _, s_ in tail]
    xs = [p[0] for p in pts]
    est = LimitEstimate(edge, min(xs), max(xs), residual_bound(k_last), len(tail), status)
    ys = [p[1] for p in pts]
    if min(dyn.top_gap(s_) for _, s_ in tail) > DELTA_EDGE:
        est.ordinate = (min(ys), max(ys))
    return est


def estimate_omega(dyn: Dynamics, start, stage_budget: int = STAGE_BUDGET) -> LimitEstimate:
    """Abscissa interval of the omega-limit set on the top edge."""
    return _estimate(dyn, start, stage_budget, "top")


def estimate_alpha(dyn: Dynamics, start, stage_budget: int = STAGE_BUDGET) -> LimitEstimate:
    """Abscissa interval of the alpha-limit set on the bottom edge."""
    est = _estimate(MirroredInverse(dyn), (start[0], -start[1]), stage_budget, "bottom")
    if est.ordinate is not None:
        est.ordinate = (-est.ordinate[1], -est.ordinate[0])
    return est


# --------------------------------------------------------------------------- classification


@dataclass(frozen=True)
class ClassifyParams:
    delta_edge: float = DELTA_EDGE
    delta_cauchy: float = DELTA_CAUCHY
    stage_budget: int = STAGE_BUDGET
    direction: Direction = "forward"


@dataclass
class SquareClassification:
    kind: str  # interior-limit | top-edge-limit | bottom-edge-limit | fixed | undetermined
    point: tuple | None = None
    steps: int = 0
    detail: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.point is not None:
            d["point"] = [_num(v) for v in self.point]
        return d


def _classify_forward(dyn: Dynamics, start, params: ClassifyParams, top_name: str) -> SquareClassification:
    st = dyn.lift(start)
    if dyn.is_fixed(st):
        return SquareClassification("fixed", dyn.coords(st), 0)
    k = params.stage_budget
    first, last = k * k, (k + 1) ** 2
    steps = 0
    block = []
    try:
        n = dyn.strip(st)
        while n < last:
            st = dyn.step(st)
            steps += 1
            n = dyn.strip(st)
            if n >= first:
                block.append(st)
    except CapReached:
        return SquareClassification("undetermined", dyn.coords(st), steps, "stage cap reached")
    if not block:
        block = [st]
    gaps = [dyn.top_gap(b) for b in block]
    if gaps[-1] < params.delta_edge and all(a >= b for a, b in zip(gaps, gaps[1:])):
        return SquareClassification(top_name, None, steps)
    pts = [tuple(map(float, dyn.coords(b))) for b in block]
    if gaps[-1] > params.delta_edge:
        spread = max(max(abs(p[0] - q[0]), abs(p[1] - q[1])) for p in pts for q in pts[-1:])
        if spread < params.delta_cauchy:
            return SquareClassification("interior-limit", dyn.coords(block[-1]), steps)
        return SquareClassification("undetermined", dyn.coords(block[-1]), steps, f"spread {spread:.3g}")
    return SquareClassification("undetermined", dyn.coords(block[-1]), steps, "edge gap not monotone")


def classify_square_orbit(dyn: Dynamics, start, params: ClassifyParams | None = None) -> SquareClassification:
    params = params or ClassifyParams()
    if params.direction == "forward":
        return _classify_forward(dyn, start, params, "top-edge-limit")
    out = _classify_forward(MirroredInverse(dyn), (start[0], -start[1]), params, "bottom-edge-limit")
    if out.point is not None:
        out.point = (out.point[0], -out.point[1])
    return out
