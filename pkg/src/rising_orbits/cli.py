"""Command line: build, orbit, limits, classify, verify, render."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import limits, plane, render
from .config import bundled_config_path, load_config
from .errors import Overflow, RisingOrbitsError
from .pl1d import as_scalar


_POINT_FLAGS = ("--square-point", "--plane-point")


def _pair(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    return tuple(parts)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rising-orbits", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=Path, default=None, help="JSON config (default: bundled lemma31.json)")
        p.add_argument("--mode", choices=("exact", "float"), default=None)
        p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
        return p

    p = cmd("build", "build the square map and serialize it")
    p.add_argument("--budget", type=int, default=4, help="stage to build through")
    for name, help_ in (("orbit", "write an orbit as CSV"), ("limits", "estimate omega/alpha limits"),
                        ("classify", "classify the plane orbit")):
        p = cmd(name, help_)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--square-point", type=_pair)
        g.add_argument("--plane-point", type=_pair)
        p.add_argument("--steps", type=int, default=20)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--direction", choices=("fwd", "bwd"), default="fwd")
    p = cmd("verify", "run the invariant suite")
    p.add_argument("--budget", type=int, default=6, help="stage for the condition check")
    p = cmd("render", "write an SVG portrait")
    p.add_argument("--view", choices=("square", "six-points", "plane"), default="square")
    p.add_argument("--square-point", type=_pair, action="append", default=[])
    p.add_argument("--steps", type=int, default=12)
    return ap


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _config_path(path: Path | None) -> Path:
    """Bare names of bundled configs (``lemma31.json``) resolve to the packaged copy."""
    if path is None:
        return bundled_config_path()
    if not path.exists() and path.parent == Path("."):
        bundled = bundled_config_path(path.name)
        if bundled.exists():
            return bundled
    return path


def eval_number(v: str):
    from .config import parse_number

    return parse_number(v)


def _glue_points(argv: list[str]) -> list[str]:
    """Let ``--square-point -0.5,0.4`` through argparse, which reads -0.5 as a flag."""
    out = []
    it = iter(argv)
    for a in it:
        if a in _POINT_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and "," in nxt:
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(a)
    return out


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = _parser().parse_args(_glue_points(argv))
    cfg = load_config(_config_path(args.config))
    mode = args.mode or cfg.mode
    exact = mode == "exact"
    if args.command == "build":
        m = cfg.build(mode=mode)
        m.advance_to(args.budget)
        _emit(_json(m.to_dict()), args.out)
        return 0
    if args.command == "verify":
        from .verify import run_suite

        checks = run_suite(cfg, cfg.build(mode=mode), stage=args.budget)
        rep = {"mode": mode, "passed": sum(c.ok for c in checks), "failed": sum(not c.ok for c in checks),
               "checks": [c.to_dict() for c in checks]}
        _emit(_json(rep), args.out)
        return 0 if rep["failed"] == 0 else 1
    if args.command == "render":
        return _render(args, cfg, mode)

    m = cfg.build(mode=mode)
    direction = "forward" if args.direction == "fwd" else "backward"
    budget = args.budget or cfg.stage_budget
    pipe = plane.PlanePipeline(m, cfg.disk)
    if args.square_point:
        x = tuple(as_scalar(eval_number(v), exact) for v in args.square_point)
    else:
        y = tuple(float(eval_number(v)) for v in args.plane_point)
        (r, s), _ = pipe.to_square(y)
        x = (as_scalar(r, exact), as_scalar(s, exact))
    dyn = pipe.g

    if args.command == "orbit":
        # --steps N gives N rows: the start and its next N - 1 iterates
        rec = limits.orbit(dyn, x, max(args.steps - 1, 0), direction)
        px, py = [], []
        for p in rec.points:
            try:
                a, b = pipe.to_plane(tuple(float(v) for v in p))
                px.append(a)
                py.append(b)
            except Overflow:
                px.append(None)
                py.append(None)
        _emit(rec.to_csv({"plane_x": px, "plane_y": py}), args.out)
        return 0 if rec.status == "completed" else 3
    if args.command == "limits":
        om = limits.estimate_omega(dyn, x, budget)
        al = limits.estimate_alpha(dyn, x, budget)
        _emit(_json({"start": [str(v) for v in x], "stage_budget": budget,
                     "omega": om.to_dict(), "alpha": al.to_dict()}), args.out)
        return 0
    if args.command == "classify":
        params = limits.ClassifyParams(cfg.delta_edge, cfg.delta_cauchy, budget)
        rep = plane.classify_plane_orbit(pipe, None, params, square_point=x)
        _emit(_json(rep.to_dict()), args.out)
        return 0
    raise AssertionError(args.command)


def _render(args, cfg, mode) -> int:
    m = cfg.build(mode=mode)
    starts = [tuple(as_scalar(eval_number(v), m.exact) for v in p) for p in args.square_point]
    if args.view == "square":
        orbits = [limits.orbit(m, p, args.steps).points for p in starts]
        svg = render.render_square(m, orbits)
    elif args.view == "six-points":
        g = plane.SixPointsMap(m)
        orbits = [limits.orbit(g, p, args.steps).points for p in starts]
        svg = render.render_six_points(orbits)
    else:
        pipe = plane.PlanePipeline(m, cfg.disk)
        orbits = []
        for p in starts:
            pts = []
            for q in limits.orbit(pipe.g, p, args.steps).points:
                try:
                    pts.append(pipe.to_plane(q))
                except Overflow:
                    pts.append(None)
            orbits.append(pts)
        svg = render.render_plane(pipe, orbits)
    _emit(svg, args.out)
    return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except RisingOrbitsError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return 2
    except (ValueError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
