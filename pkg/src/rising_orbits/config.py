"""JSON configuration: schema check, rational literals, family/profile decoding."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema

from .builder import DEFAULT_MAX_STAGE, DEFAULT_SNAP_BITS, BuiltSquareMap, init
from .errors import ParseError, RisingOrbitsError, ValidationError
from .limits import ClassifyParams
from .plane import DiskSpec
from .profiles import Envelope, Interval, IntervalFamily, Member, make_profile, validate_families

DATA_DIR = Path(__file__).parent / "data"
MAX_STAGE_ENV = "RISING_ORBITS_MAX_STAGE"
_INTERVAL = re.compile(r"^\s*(?:\{\s*(?P<pt>[^}]+?)\s*\}|(?P<l>[\[(])\s*(?P<a>[^,]+?)\s*,\s*(?P<b>[^\])]+?)\s*(?P<r>[\])]))\s*$")


def parse_number(v) -> Fraction:
    """Ints, decimal strings, ``"p/q"`` strings and floats (by their decimal repr)."""
    if isinstance(v, bool):
        raise ParseError(f"expected a number, got {v!r}")
    if isinstance(v, float):
        return Fraction(repr(v))
    try:
        return Fraction(v.replace(" ", "") if isinstance(v, str) else v)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"bad number {v!r}") from exc


def parse_interval(v) -> Interval:
    if isinstance(v, dict):
        return Interval(parse_number(v["a"]), parse_number(v["b"]),
                        v.get("left_closed", True), v.get("right_closed", True))
    m = _INTERVAL.match(v)
    if not m:
        raise ParseError(f"bad interval {v!r}")
    if m["pt"] is not None:
        return Interval.point(parse_number(m["pt"]))
    return Interval(parse_number(m["a"]), parse_number(m["b"]), m["l"] == "[", m["r"] == "]")


def interval_to_str(v: Interval) -> str:
    return str(v)


def family_from_dict(rows, side: str) -> IntervalFamily:
    members = []
    for row in rows:
        prof = row["profile"]
        lower = Envelope.from_table([[parse_number(x) for x in r] for r in prof["lower"]])
        upper = Envelope.from_table([[parse_number(x) for x in r] for r in prof.get("upper", prof["lower"])])
        members.append(Member(int(row["id"]), parse_interval(row["set"]), make_profile(lower, upper, side)))
    return IntervalFamily(tuple(members), side)


def family_to_dict(fam: IntervalFamily) -> list:
    return [
        {"id": m.id, "set": interval_to_str(m.set),
         "profile": {"lower": m.profile.lower.table(), "upper": m.profile.upper.table()}}
        for m in fam
    ]


@dataclass
class Config:
    mode: str
    max_stage: int
    snap_bits: int | None
    omega_family: IntervalFamily
    alpha_family: IntervalFamily
    disk: DiskSpec
    stage_budget: int = 30
    delta_edge: float = 1e-3
    delta_cauchy: float = 1e-4
    outputs: dict = field(default_factory=dict)
    source: str = ""

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def classify_params(self) -> ClassifyParams:
        return ClassifyParams(self.delta_edge, self.delta_cauchy, self.stage_budget)

    def build(self, *, mode: str | None = None, max_stage: int | None = None) -> BuiltSquareMap:
        return init(
            self.omega_family, self.alpha_family,
            exact=(mode or self.mode) == "exact",
            max_stage=max_stage or self.max_stage,
            snap_bits=self.snap_bits,
        )


def schema() -> dict:
    return json.loads((DATA_DIR / "config.schema.json").read_text())


def bundled_config_path(name: str = "lemma31.json") -> Path:
    return DATA_DIR / name


def _stage_cap(raw) -> int:
    env = os.environ.get(MAX_STAGE_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ParseError(f"{MAX_STAGE_ENV} must be an integer, got {env!r}") from exc
    return int(raw.get("max_stage", DEFAULT_MAX_STAGE))


def config_from_dict(raw: dict, source: str = "<dict>") -> Config:
    try:
        jsonschema.validate(raw, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ParseError(f"{source}: field {where}: {exc.message}") from exc
    try:
        om = family_from_dict(raw["omega_family"], "omega")
        al = family_from_dict(raw.get("alpha_family", []), "alpha")
        validate_families(om, al)
        dk = raw.get("disk", {"kind": "ellipse", "center": [0, 0], "semi_axes": [1, 1]})
        disk = DiskSpec(
            dk["kind"], tuple(dk.get("center", (0.0, 0.0))),
            half_widths=tuple(dk["half_widths"]) if "half_widths" in dk else None,
            semi_axes=tuple(dk["semi_axes"]) if "semi_axes" in dk else None,
            vertices=tuple(tuple(v) for v in dk["vertices"]) if "vertices" in dk else None,
        )
    except ParseError:
        raise
    except (RisingOrbitsError, ValueError) as exc:
        raise ValidationError(f"{source}: {exc}", exc) from exc
    est = raw.get("estimation", {})
    return Config(
        mode=raw.get("mode", "float"),
        max_stage=_stage_cap(raw),
        snap_bits=raw.get("snap_bits", DEFAULT_SNAP_BITS),
        omega_family=om,
        alpha_family=al,
        disk=disk,
        stage_budget=est.get("stage_budget", 30),
        delta_edge=est.get("delta_edge", 1e-3),
        delta_cauchy=est.get("delta_cauchy", 1e-4),
        outputs=raw.get("outputs", {}),
        source=source,
    )


def load_config(path) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    if not text.strip():
        raise ParseError(f"{path}: empty file")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    return config_from_dict(raw, str(path))
