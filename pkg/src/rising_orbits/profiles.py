"""Limit profiles, the interval families they are attached to, and the dense abscissa grid.

A profile prescribes, for every abscissa r, the closed interval
``[lower(r), upper(r)]`` of the top (omega side) or bottom (alpha side) edge that an
orbit starting above r should accumulate on.  Profile data is always stored as
exact rationals; builders convert to floats when running in floating mode.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Iterable, Iterator, Literal, Sequence

from .errors import (
    DomainError,
    EndpointsNotPreserved,
    EnvelopeOrderViolated,
    NotIncreasing,
    OutOfRange,
    OverlapError,
)

HALF = Fraction(1, 2)
Side = Literal["omega", "alpha"]


def _fr(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Breakpoint:
    x: Fraction
    left: Fraction
    value: Fraction
    right: Fraction

    @property
    def is_jump(self) -> bool:
        return not (self.left == self.value == self.right)


@dataclass(frozen=True)
class Envelope:
    """Non-decreasing function on J: linear between breakpoints, explicit values at jumps.

    Between consecutive breakpoints the function runs linearly from the right limit
    of the first to the left limit of the second.
    """

    points: tuple[Breakpoint, ...]

    @classmethod
    def from_table(cls, rows: Iterable[Sequence]) -> "Envelope":
        """Rows are ``(x, y)`` for a continuous point or ``(x, left, value, right)``."""
        pts = []
        for row in rows:
            if len(row) == 2:
                x, y = _fr(row[0]), _fr(row[1])
                pts.append(Breakpoint(x, y, y, y))
            elif len(row) == 4:
                pts.append(Breakpoint(*(_fr(v) for v in row)))
            else:
                raise ValueError(f"envelope row must have 2 or 4 entries, got {row!r}")
        return cls(tuple(pts))

    @classmethod
    def identity(cls) -> "Envelope":
        return cls.from_table([(-1, -1), (1, 1)])

    @classmethod
    def constant_on(cls, lo, hi, value) -> "Envelope":
        """Identity outside [lo, hi] joined linearly to ``value`` on [lo, hi]."""
        return cls.from_table([(-1, -1), (lo, value), (hi, value), (1, 1)])

    @property
    def xs(self) -> list[Fraction]:
        return [p.x for p in self.points]

    @property
    def jumps(self) -> list[Fraction]:
        return [p.x for p in self.points if p.is_jump]

    def table(self) -> list[list[str]]:
        out = []
        for p in self.points:
            if p.is_jump:
                out.append([str(p.x), str(p.left), str(p.value), str(p.right)])
            else:
                out.append([str(p.x), str(p.value)])
        return out

    def check_increasing(self) -> None:
        pts = self.points
        if len(pts) < 2 or pts[0].x != -1 or pts[-1].x != 1:
            raise DomainError("envelope must be tabulated on all of [-1, 1]")
        for a, b in zip(pts, pts[1:]):
            if not a.x < b.x:
                raise NotIncreasing("breakpoint abscissae must be strictly increasing")
            if a.right > b.left:
                raise NotIncreasing(f"envelope decreases on [{a.x}, {b.x}]")
        for p in pts:
            if not p.left <= p.value <= p.right:
                raise NotIncreasing(f"jump at {p.x} is not monotone")
            if not (-1 <= p.left and p.right <= 1):
                raise DomainError(f"envelope leaves J at {p.x}")

    def __call__(self, r) -> Fraction:
        return self.value_at(r)

    def value_at(self, r, side: int = 0):
        """side = -1/0/+1 selects left limit, stored value, right limit at a breakpoint."""
        if not -1 <= r <= 1:
            raise DomainError(f"abscissa {r} outside J")
        pts = self.points
        xs = self.xs
        j = bisect_left(xs, r)
        if j < len(xs) and xs[j] == r:
            p = pts[j]
            return p.left if side < 0 else p.right if side > 0 else p.value
        a, b = pts[j - 1], pts[j]
        return a.right + (r - a.x) * (b.left - a.right) / (b.x - a.x)


@dataclass(frozen=True)
class LimitProfile:
    lower: Envelope
    upper: Envelope
    side: Side = "omega"

    @property
    def breakpoints(self) -> list[Fraction]:
        return sorted(set(self.lower.xs) | set(self.upper.xs))

    @property
    def discontinuities(self) -> list[Fraction]:
        return sorted(set(self.lower.jumps) | set(self.upper.jumps))

    def to_dict(self) -> dict:
        return {"lower": self.lower.table(), "upper": self.upper.table()}


def make_profile(lower: Envelope, upper: Envelope | None = None, side: Side = "omega") -> LimitProfile:
    if upper is None:
        upper = lower
    if side not in ("omega", "alpha"):
        raise ValueError(f"unknown side {side!r}")
    lower.check_increasing()
    upper.check_increasing()
    for env in (lower, upper):
        if env.value_at(-1) != -1 or env.value_at(1) != 1:
            raise EndpointsNotPreserved("envelopes must take the value -1 at -1 and 1 at 1")
    # both PL between merged breakpoints: compare all one-sided values there
    xs = sorted(set(lower.xs) | set(upper.xs))
    for x in xs:
        for side_ in (-1, 0, 1):
            if lower.value_at(x, side_) > upper.value_at(x, side_):
                raise EnvelopeOrderViolated(f"lower > upper at r = {x}")
    return LimitProfile(lower, upper, side)


def identity_profile(side: Side = "omega") -> LimitProfile:
    env = Envelope.identity()
    return make_profile(env, env, side)


def profile_target(p: LimitProfile, r, branch: int):
    if branch not in (1, 2):
        raise ValueError("branch must be 1 (lower) or 2 (upper)")
    env = p.lower if branch == 1 else p.upper
    return env.value_at(_fr(r) if not isinstance(r, (Fraction, int)) else r)


@dataclass(frozen=True)
class Interval:
    """Connected subset of the line with endpoint flags; a == b means a singleton."""

    a: Fraction
    b: Fraction
    left_closed: bool = True
    right_closed: bool = True

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError("interval endpoints out of order")
        if self.a == self.b and not (self.left_closed and self.right_closed):
            raise ValueError("empty interval")

    @classmethod
    def point(cls, x) -> "Interval":
        x = _fr(x)
        return cls(x, x)

    @classmethod
    def open(cls, a, b) -> "Interval":
        return cls(_fr(a), _fr(b), False, False)

    @classmethod
    def closed(cls, a, b) -> "Interval":
        return cls(_fr(a), _fr(b), True, True)

    @property
    def is_point(self) -> bool:
        return self.a == self.b

    def __contains__(self, x) -> bool:
        if x < self.a or x > self.b:
            return False
        if x == self.a and not self.left_closed:
            return False
        if x == self.b and not self.right_closed:
            return False
        return True

    def intersects(self, other: "Interval") -> bool:
        lo, hi = max(self.a, other.a), min(self.b, other.b)
        if lo < hi:
            return True
        if lo > hi:
            return False
        return lo in self and lo in other

    def to_dict(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "left_closed": self.left_closed,
            "right_closed": self.right_closed,
        }

    def __str__(self) -> str:
        if self.is_point:
            return f"{{{self.a}}}"
        return f"{'[' if self.left_closed else '('}{self.a}, {self.b}{']' if self.right_closed else ')'}"


def truncate(v: Interval, k: int) -> tuple[Fraction, Fraction]:
    """Closed interval V_k; increasing in k and exhausting V."""
    if k < 1:
        raise ValueError("k must be positive")
    a, b = v.a, v.b
    if v.is_point or (v.left_closed and v.right_closed):
        return a, b
    lo = a if v.left_closed else (k * a + b) / (k + 1)
    hi = b if v.right_closed else (a + k * b) / (k + 1)
    return lo, hi


@dataclass(frozen=True)
class Member:
    id: int
    set: Interval
    profile: LimitProfile


@dataclass(frozen=True)
class IntervalFamily:
    members: tuple[Member, ...]
    side: Side = "omega"

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Member]:
        return iter(self.members)

    def __getitem__(self, i) -> Member:
        return self.members[i]

    @property
    def profiles(self) -> list[LimitProfile]:
        return [m.profile for m in self.members]


def _check_family(fam: IntervalFamily) -> None:
    for m in fam:
        v = m.set
        if v.a < 0 or v.b > HALF or (v.a == 0 and v.left_closed):
            raise OutOfRange(f"member {m.id} = {v} is not contained in (0, 1/2]")
        if m.profile.side != fam.side:
            raise ValueError(f"member {m.id} carries a {m.profile.side} profile in the {fam.side} family")
    ms = fam.members
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            if ms[i].set.intersects(ms[j].set):
                raise OverlapError(f"members {ms[i].id} and {ms[j].id} intersect")


def normalize_family(fam: IntervalFamily) -> tuple[IntervalFamily, dict]:
    """Make {1/2} the first member, adding or splitting it off as needed."""
    _check_family(fam)
    note = {}
    rest = []
    first = None
    for m in fam:
        if HALF in m.set:
            if m.set.is_point:
                first = m
            else:
                first = Member(m.id, Interval.point(HALF), m.profile)
                rest.append(Member(m.id, Interval(m.set.a, HALF, m.set.left_closed, False), m.profile))
                note = {"split": m.id}
        else:
            rest.append(m)
    if first is None:
        used = {m.id for m in fam}
        new_id = next(i for i in count(0) if i not in used)
        first = Member(new_id, Interval.point(HALF), identity_profile(fam.side))
        note = {"added": new_id}
    return IntervalFamily((first, *rest), fam.side), note


def validate_families(omega_family: IntervalFamily, alpha_family: IntervalFamily):
    """Check both families separately and normalize them; cross-overlap is allowed."""
    om, n1 = normalize_family(omega_family)
    al, n2 = normalize_family(alpha_family)
    return om, al, {"omega": n1, "alpha": n2}


def _dyadics() -> Iterator[Fraction]:
    yield Fraction(0)
    level = 1
    while True:
        den = 2**level
        for num in range(-den + 1, den, 2):
            yield Fraction(num, den)
        level += 1


class DenseGrid:
    """r_{-1} = -1, r_0 = 1, then profile breakpoints, then dyadics breadth-first."""

    def __init__(self, profiles: Iterable[LimitProfile] = ()):
        bps = set()
        for p in profiles:
            bps.update(p.breakpoints)
        bps.discard(Fraction(-1))
        bps.discard(Fraction(1))
        self.breakpoints = sorted(bps)
        self._seq: list[Fraction] = [Fraction(-1), Fraction(1), *self.breakpoints]
        self._seen = set(self._seq)
        self._tail = _dyadics()

    def __getitem__(self, i: int) -> Fraction:
        """Entry r_{i-1}; index 0 is r_{-1} = -1."""
        while len(self._seq) <= i:
            d = next(self._tail)
            if d not in self._seen:
                self._seen.add(d)
                self._seq.append(d)
        return self._seq[i]

    def prefix(self, k: int) -> list[Fraction]:
        if k < 0:
            raise ValueError("k must be non-negative")
        self[k + 1]
        return list(self._seq[: k + 2])


def grid_prefix(grid: DenseGrid, k: int) -> list[Fraction]:
    return grid.prefix(k)
