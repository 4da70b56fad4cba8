"""Monotone piecewise-linear maps of an interval and the strip bookkeeping of J = [-1, 1].

Every quantity in the square construction is rational, so all routines here are
written against a generic scalar type: :class:`fractions.Fraction` in exact mode,
``float`` otherwise.  Nothing in this module mixes the two.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainError, NotInvertible, RangeError

Scalar = Union[Fraction, float]

EPS_DOM = 1e-12
EPS_INV = 1e-12


def as_scalar(value, exact: bool) -> Scalar:
    """Coerce ints, floats, Fractions and ``"p/q"`` strings to the requested mode."""
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, float):
            if not math.isfinite(value):
                raise DomainError(f"non-finite value {value!r}")
            # decimal literal, not the binary expansion
            return Fraction(repr(value))
        return Fraction(value)
    if isinstance(value, str):
        value = Fraction(value)
    out = float(value)
    if not math.isfinite(out):
        raise DomainError(f"non-finite value {value!r}")
    return out


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


@dataclass(frozen=True)
class MonotonePL1D:
    """Monotone PL function through ``(xs[i], ys[i])``; domain ``[xs[0], xs[-1]]``."""

    xs: tuple
    ys: tuple
    strict: bool = True

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ValueError("need at least two breakpoints")
        for a, b in zip(self.xs, self.xs[1:]):
            if not a < b:
                raise ValueError("breakpoint abscissae must be strictly increasing")
        for a, b in zip(self.ys, self.ys[1:]):
            if self.strict and not a < b:
                raise ValueError("values must be strictly increasing")
            if not self.strict and not a <= b:
                raise ValueError("values must be non-decreasing")

    @classmethod
    def from_points(cls, points: Iterable[Sequence], strict: bool = True, exact: bool = True):
        pts = [(as_scalar(x, exact), as_scalar(y, exact)) for x, y in points]
        return cls(tuple(p[0] for p in pts), tuple(p[1] for p in pts), strict)

    @classmethod
    def identity(cls, lo=-1, hi=1, exact: bool = True):
        return cls.from_points([(lo, lo), (hi, hi)], exact=exact)

    @property
    def domain(self):
        return self.xs[0], self.xs[-1]

    @property
    def range(self):
        return self.ys[0], self.ys[-1]

    def to_float(self) -> "MonotonePL1D":
        return MonotonePL1D(tuple(map(float, self.xs)), tuple(map(float, self.ys)), self.strict)

    def __call__(self, x):
        return eval_pl(self, x)


def _interp(x, xs, ys):
    # xs strictly increasing, xs[0] <= x <= xs[-1]
    j = bisect_right(xs, x)
    if j >= len(xs):
        return ys[-1]
    if j == 0:
        return ys[0]
    x0, x1 = xs[j - 1], xs[j]
    if x == x0:
        return ys[j - 1]
    y0, y1 = ys[j - 1], ys[j]
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0)


def _clamp(x, lo, hi, what):
    if x < lo or x > hi:
        if is_exact(x) and is_exact(lo):
            raise what(f"{x} outside [{lo}, {hi}]")
        if x < lo - EPS_DOM or x > hi + EPS_DOM:
            raise what(f"{x} outside [{lo}, {hi}]")
        return lo if x < lo else hi
    return x


def eval_pl(m: MonotonePL1D, x):
    x = _clamp(x, m.xs[0], m.xs[-1], DomainError)
    return _interp(x, m.xs, m.ys)


def invert_pl(m: MonotonePL1D, y):
    y = _clamp(y, m.ys[0], m.ys[-1], RangeError)
    if not m.strict:
        lo = bisect_left(m.ys, y)
        hi = bisect_right(m.ys, y)
        if hi - lo > 1:
            raise NotInvertible(f"flat segment at value {y}")
    return _interp(y, m.ys, m.xs)


# f01 on J: (s+1)/2 on [0,1], s+1/2 on [-1/2,0], 2s+1 on [-1,-1/2]
F01 = MonotonePL1D.from_points([(-1, -1), (Fraction(-1, 2), 0), (0, Fraction(1, 2)), (1, 1)])
F01_FLOAT = F01.to_float()


def f01(s):
    return eval_pl(F01 if is_exact(s) else F01_FLOAT, s)


def f01_inv(s):
    return invert_pl(F01 if is_exact(s) else F01_FLOAT, s)


def _pow2(e: int, exact: bool):
    if exact:
        return Fraction(2) ** e
    return math.ldexp(1.0, e)


def level(n: int, exact: bool = True) -> Scalar:
    """t_n = f01^n(0): ``1 - 2**-n`` for n >= 0 and ``2**n - 1`` for n < 0."""
    if n >= 0:
        return 1 - _pow2(-n, exact)
    return _pow2(n, exact) - 1


def strip_width(n: int, exact: bool = True) -> Scalar:
    return _pow2(-n, exact) if n >= 1 else _pow2(n - 1, exact)


def _floor_log2(q) -> int:
    if isinstance(q, float):
        m, e = math.frexp(q)
        return e - 1
    q = Fraction(q)
    k = q.numerator.bit_length() - q.denominator.bit_length()
    if Fraction(2) ** k > q:
        k -= 1
    return k


@dataclass(frozen=True)
class StripIndex:
    n: int
    lower: Scalar
    upper: Scalar


def strip_number(s) -> int:
    """Index n with t_{n-1} <= s < t_n (levels belong to the strip above)."""
    if not -1 < s < 1:
        raise DomainError(f"ordinate {s} not in the open interval (-1, 1)")
    if s >= 0:
        e = 1 - s
        k = _floor_log2(e)
        return 1 - k if e == _pow2(k, is_exact(e)) else -k
    return _floor_log2(1 + s) + 1


def strip_of(s, exact: bool | None = None) -> StripIndex:
    if exact is None:
        exact = is_exact(s)
    n = strip_number(s)
    return StripIndex(n, level(n - 1, exact), level(n, exact))


def to_strip(s):
    """Return ``(n, sigma)`` with s = t_{n-1} + sigma * width(n), 0 <= sigma < 1."""
    exact = is_exact(s)
    n = strip_number(s)
    sigma = (s - level(n - 1, exact)) / strip_width(n, exact)
    if not exact:
        sigma = min(max(sigma, 0.0), 1.0)
    return n, sigma


def from_strip(n: int, sigma):
    exact = is_exact(sigma)
    return level(n - 1, exact) + sigma * strip_width(n, exact)


def edge_gap(n: int, sigma) -> float:
    """Distance to the nearer horizontal edge as a float, accurate for huge |n|."""
    sigma = float(sigma)
    if n >= 1:
        return math.ldexp(2.0 - sigma, -n)
    return math.ldexp(1.0 + sigma, n - 1)
