"""Plain SVG phase portraits (1024 x 1024 viewBox, no plotting dependency)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .builder import BuiltSquareMap
from .pl1d import from_strip, level
from .plane import SIX, PlanePipeline

SIZE = 1024
PAD = 48


def _f(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, xlim=(-1.0, 1.0), ylim=(-1.0, 1.0)):
        self.xlim, self.ylim = xlim, ylim
        self.items: list[str] = []

    def xy(self, x, y):
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        span = SIZE - 2 * PAD
        return PAD + (float(x) - x0) / (x1 - x0) * span, SIZE - PAD - (float(y) - y0) / (y1 - y0) * span

    def line(self, p, q, stroke="#000", width=1.0, extra=""):
        (a, b), (c, d) = self.xy(*p), self.xy(*q)
        self.items.append(
            f'<line x1="{_f(a)}" y1="{_f(b)}" x2="{_f(c)}" y2="{_f(d)}" stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def polyline(self, pts, stroke="#000", width=1.0, extra=""):
        if len(pts) < 2:
            return
        coords = " ".join(f"{_f(a)},{_f(b)}" for a, b in (self.xy(*p) for p in pts))
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width}"{extra}/>')

    def dot(self, p, r=3.0, fill="#000"):
        a, b = self.xy(*p)
        self.items.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="{r}" fill="{fill}"/>')

    def text(self, p, s, dx=6, dy=-6):
        a, b = self.xy(*p)
        self.items.append(f'<text x="{_f(a + dx)}" y="{_f(b + dy)}" font-size="18" font-family="serif">{s}</text>')

    def svg(self) -> str:
        head = f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">'
        return "\n".join([head, '<rect width="100%" height="100%" fill="#fff"/>', *self.items, "</svg>", ""])


def _frame(cv: _Canvas):
    cv.polyline([(-1, -1), (1, -1), (1, 1), (-1, 1), (-1, -1)], width=2)


def _orbit_paths(cv: _Canvas, orbits, colors=("#c0392b", "#2471a3", "#1e8449", "#7d3c98")):
    for i, pts in enumerate(orbits):
        c = colors[i % len(colors)]
        cv.polyline(pts, stroke=c, width=1.2, extra=' stroke-dasharray="2,4"')
        for p in pts:
            cv.dot(p, 2.5, c)


def render_square(m: BuiltSquareMap, orbits: Iterable[Sequence] = (), stages: int = 3, levels: int = 10,
                  samples: int = 5) -> str:
    """Strips as light rules, stage anchor arcs (upper half) as polylines, orbits dotted."""
    cv = _Canvas()
    for n in range(-levels, levels + 1):
        t = float(level(n, exact=False))
        cv.line((-1, t), (1, t), stroke="#d5d8dc", width=0.8)
    _frame(cv)
    b = m.upper
    for k in range(1, stages + 1):
        for lo, hi, _mem in b.bands(k):
            if lo == hi:
                sigmas = [lo]
            else:
                sigmas = [lo + (hi - lo) * Fraction(j, samples - 1) for j in range(samples)]
                if not b.exact:
                    sigmas = [float(s) for s in sigmas]
            data = [b.stage_data(sg, k) for sg in sigmas]
            for idx in range(len(data[0].x0)):
                for i in range(2 * k + 2):
                    n = k * k + i
                    pts = []
                    for sg, d in zip(sigmas, data):
                        x0, t = d.x0[idx], d.targets[idx]
                        pts.append((float(x0 + i * (t - x0) / (2 * k + 7)), float(from_strip(n, sg))))
                    if len(pts) == 1:
                        cv.dot(pts[0], 1.5, "#566573")
                    else:
                        cv.polyline(pts, stroke="#566573", width=1.0)
    _orbit_paths(cv, [[(float(r), float(s)) for r, s in o] for o in orbits])
    return cv.svg()


def render_six_points(orbits: Iterable[Sequence] = ()) -> str:
    """Square with F, L1, the slits and the labelled points u, v, w, x."""
    cv = _Canvas()
    _frame(cv)
    cv.line((-1, 0.5), (1, 0.5), stroke="#d5d8dc")
    cv.line((-1, -0.5), (1, -0.5), stroke="#d5d8dc")
    k0, k1 = (float(v) for v in SIX.K)
    cv.polyline([(-0.5, k0), (0.5, k0), (0.5, k1), (-0.5, k1), (-0.5, k0)], stroke="#2471a3", width=2)
    cv.line((-0.5, k0), (-0.5, k1), stroke="#c0392b", width=3)
    for i in (0, 2, 3, 5):
        cv.line(SIX.u[i], SIX.x[i], stroke="#7d3c98", width=2.5)
    for name, pts in (("u", SIX.u), ("v", SIX.v), ("w", SIX.w), ("x", SIX.x)):
        for i, p in enumerate(pts, start=1):
            cv.dot(p, 4)
            cv.text(p, f"{name}{i}", dy=-8 if p[1] > 0 else 22)
    _orbit_paths(cv, [[(float(r), float(s)) for r, s in o] for o in orbits])
    return cv.svg()


def render_plane(pipe: PlanePipeline, orbits: Iterable[Sequence] = (), viewport: float = 4.0, boundary: int = 256) -> str:
    """Disk E, the limit points of the boundary classes, and plane orbits clipped to the viewport."""
    cv = _Canvas((-viewport, viewport), (-viewport, viewport))
    cv.line((-viewport, 0), (viewport, 0), stroke="#d5d8dc")
    cv.line((0, -viewport), (0, viewport), stroke="#d5d8dc")
    ring = []
    for j in range(boundary + 1):
        th = 2 * math.pi * j / boundary
        rho = pipe.disk.radius(th)
        ring.append((pipe.disk.center[0] + rho * math.cos(th), pipe.disk.center[1] + rho * math.sin(th)))
    cv.polyline(ring, stroke="#2471a3", width=2)
    for i in range(6):
        p = pipe.to_plane(SIX.x[i])
        if max(abs(p[0]), abs(p[1])) <= viewport:
            cv.dot(p, 4)
            cv.text(p, f"x{i + 1}")
    clipped = []
    for o in orbits:
        clipped.append([p for p in o if p is not None and max(abs(p[0]), abs(p[1])) <= viewport])
    _orbit_paths(cv, clipped)
    return cv.svg()
