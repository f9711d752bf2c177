"""Bench configuration files.

Grammar::

    # comment
    [section]
    key = value     # trailing comment

Sections and keys (defaults in parentheses):

    [source]    phi (0 rad), mapping (o=x,e=y | o=y,e=x)
    [geometry]  wavelength (702.2 nm), slit_width (200 um),
                slit_separation (400 um, center to center),
                distance (0.83 m, slits to scanning detector)
                -- the section itself is required
    [elements]  qwp1, qwp2, pol1 (absent), detection_order (p-first),
                p_distance (0.98 m, metadata only)
    [scan]      start (-2 mm), stop (2 mm), points (61), peak_rate (200),
                dwell_scale (1), seed (0), misalignment (0 rad)

Angles need an explicit ``deg`` or ``rad`` suffix.  Lengths take an
optional ``m``, ``cm``, ``mm``, ``um`` or ``nm`` suffix (meters if bare).
Unknown sections or keys are errors.  ``peak_rate`` defaults to an
invented 200 counts per dwell.
"""

from __future__ import annotations

import dataclasses
import math
import re
from decimal import Decimal
from importlib import resources
from pathlib import Path
from dataclasses import dataclass, field

from .engine import BenchGeometry
from .optics import MAPPINGS, PairSourceSpec
from .qstate import EraserError
from .scan import DEFAULT_PEAK_RATE, ScanConfig


class ConfigError(EraserError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, key: str | None = None):
        self.line, self.column, self.key = line, column, key
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Elements:
    qwp1: float | None = None
    qwp2: float | None = None
    pol1: float | None = None
    detection_order: str = "p-first"
    p_distance: float = 0.98


@dataclass(frozen=True)
class ScanBlock:
    start: float = -2e-3
    stop: float = 2e-3
    points: int = 61
    peak_rate: float = DEFAULT_PEAK_RATE
    dwell_scale: float = 1.0
    seed: int = 0
    misalignment: float = 0.0


@dataclass(frozen=True)
class BenchConfig:
    source: PairSourceSpec = field(default_factory=PairSourceSpec)
    geometry: BenchGeometry = field(default_factory=BenchGeometry)
    elements: Elements = field(default_factory=Elements)
    scan: ScanBlock = field(default_factory=ScanBlock)

    def scan_config(self, seed: int | None = None, points: int | None = None) -> ScanConfig:
        s, e = self.scan, self.elements
        return ScanConfig(
            geometry=self.geometry,
            theta1=e.qwp1,
            theta2=e.qwp2,
            alpha=e.pol1,
            phi=self.source.phi,
            mapping=self.source.mapping,
            peak_rate=s.peak_rate,
            dwell_scale=s.dwell_scale,
            qwp_misalignment=s.misalignment,
            seed=s.seed if seed is None else seed,
            start=s.start,
            stop=s.stop,
            points=s.points if points is None else points,
            detection_order=e.detection_order,
        )

    def replace(self, **blocks) -> "BenchConfig":
        return dataclasses.replace(self, **blocks)


_LENGTH_UNITS = {"m": "1", "cm": "1e-2", "mm": "1e-3", "um": "1e-6", "nm": "1e-9"}
_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_ANGLE_RE = re.compile(rf"^({_NUMBER})\s*(deg|rad)$")
_LENGTH_RE = re.compile(rf"^({_NUMBER})\s*(m|cm|mm|um|nm)?$")


def _angle(v: str):
    m = _ANGLE_RE.match(v)
    if not m:
        raise ValueError("angle needs a number and a unit suffix 'deg' or 'rad'")
    x = float(m.group(1))
    return math.radians(x) if m.group(2) == "deg" else x


def _optional_angle(v: str):
    return None if v == "absent" else _angle(v)


def _length(v: str):
    m = _LENGTH_RE.match(v)
    if not m:
        raise ValueError("expected a length, optionally suffixed m/cm/mm/um/nm")
    # decimal product so "83 cm" is exactly 0.83
    return float(Decimal(m.group(1)) * Decimal(_LENGTH_UNITS[m.group(2) or "m"]))


def _float(v: str):
    x = float(v)
    if not math.isfinite(x):
        raise ValueError("must be finite")
    return x


def _int(v: str):
    return int(v, 10)


def _choice(options):
    def parse(v: str):
        if v not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return v

    return parse


_SCHEMA = {
    "source": {"phi": _angle, "mapping": _choice(MAPPINGS)},
    "geometry": {"wavelength": _length, "slit_width": _length, "slit_separation": _length, "distance": _length},
    "elements": {
        "qwp1": _optional_angle,
        "qwp2": _optional_angle,
        "pol1": _optional_angle,
        "detection_order": _choice(("p-first", "s-first")),
        "p_distance": _length,
    },
    "scan": {
        "start": _length,
        "stop": _length,
        "points": _int,
        "peak_rate": _float,
        "dwell_scale": _float,
        "seed": _int,
        "misalignment": _angle,
    },
}


def parse_config(text: str) -> BenchConfig:
    values: dict[str, dict[str, object]] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("unterminated section header", lineno, indent)
            section = stripped[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]", lineno, indent)
            if section in values:
                raise ConfigError(f"duplicate section [{section}]", lineno, indent)
            values[section] = {}
            continue
        if "=" not in stripped:
            raise ConfigError("expected 'key = value'", lineno, indent)
        if section is None:
            raise ConfigError("key outside of any section", lineno, indent)
        key, value = (s.strip() for s in stripped.split("=", 1))
        if key not in _SCHEMA[section]:
            raise ConfigError(f"unknown key '{key}' in [{section}]", lineno, indent, key)
        if key in values[section]:
            raise ConfigError(f"duplicate key '{key}'", lineno, indent, key)
        after = line.split("=", 1)[1]
        vcol = line.index("=") + 2 + len(after) - len(after.lstrip())
        try:
            values[section][key] = _SCHEMA[section][key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for '{key}': {exc}", lineno, vcol, key) from None

    if "geometry" not in values:
        raise ConfigError("missing [geometry] section")

    def build(section, cls):
        try:
            return cls(**values.get(section, {}))
        except ValueError as exc:
            keys = ", ".join(values.get(section, {})) or "defaults"
            raise ConfigError(f"[{section}] ({keys}): {exc}") from None

    geometry = build("geometry", BenchGeometry)
    cfg = BenchConfig(
        source=build("source", PairSourceSpec),
        geometry=geometry,
        elements=build("elements", Elements),
        scan=build("scan", ScanBlock),
    )
    try:
        cfg.scan_config()
    except ValueError as exc:
        raise ConfigError(f"[scan]: {exc}") from None
    return cfg


def _fmt_angle(v):
    return "absent" if v is None else f"{v!r} rad"


def serialize_config(cfg: BenchConfig) -> str:
    """Text form that parses back to an equal config (angles written in rad)."""
    s, g, e, sc = cfg.source, cfg.geometry, cfg.elements, cfg.scan
    lines = [
        "[source]",
        f"phi = {_fmt_angle(s.phi)}",
        f"mapping = {s.mapping}",
        "",
        "[geometry]",
        f"wavelength = {g.wavelength!r} m",
        f"slit_width = {g.slit_width!r} m",
        f"slit_separation = {g.slit_separation!r} m",
        f"distance = {g.distance!r} m",
        "",
        "[elements]",
        f"qwp1 = {_fmt_angle(e.qwp1)}",
        f"qwp2 = {_fmt_angle(e.qwp2)}",
        f"pol1 = {_fmt_angle(e.pol1)}",
        f"detection_order = {e.detection_order}",
        f"p_distance = {e.p_distance!r} m",
        "",
        "[scan]",
        f"start = {sc.start!r} m",
        f"stop = {sc.stop!r} m",
        f"points = {sc.points}",
        f"peak_rate = {sc.peak_rate!r}",
        f"dwell_scale = {sc.dwell_scale!r}",
        f"seed = {sc.seed}",
        f"misalignment = {_fmt_angle(sc.misalignment)}",
    ]
    return "\n".join(lines) + "\n"


def load_config(path) -> BenchConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def bundled_configs() -> dict[str, Path]:
    """Name -> path of the configs shipped in ``eraserlab/paper``."""
    root = resources.files("eraserlab") / "paper"
    return {p.name.removesuffix(".bench"): Path(str(p)) for p in sorted(root.iterdir(), key=lambda p: p.name) if p.name.endswith(".bench")}
