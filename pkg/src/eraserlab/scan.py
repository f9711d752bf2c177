"""Monte Carlo detector scans with Poisson coincidence counts.

Random streams: point ``i`` of a scan with seed ``s`` draws from
``PCG64(SeedSequence(s, spawn_key=(i,)))``.  Each point owns its stream,
so points can be generated in any order or in parallel and still give the
same record.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import BenchGeometry, coincidence_pattern, prepare
from .optics import PairSourceSpec

# Invented default: no absolute rates are known for the reference scans.
DEFAULT_PEAK_RATE = 200.0


@dataclass(frozen=True)
class ScanConfig:
    """One detector scan.

    ``theta1``/``theta2``/``alpha`` of ``None`` mean the element is removed.
    ``qwp_misalignment`` is added to the slit-1 plate only, so a nonzero
    value leaves the two fast axes off-orthogonal (a rigid rotation of both
    plates keeps them orthogonal and cannot leave residual fringes).
    ``peak_rate`` is the expected count per dwell at the central maximum of
    the bare double-slit pattern; ``dwell_scale`` multiplies it.
    """

    geometry: BenchGeometry = field(default_factory=BenchGeometry)
    theta1: float | None = None
    theta2: float | None = None
    alpha: float | None = None
    phi: float = 0.0
    mapping: str = "o=x,e=y"
    peak_rate: float = DEFAULT_PEAK_RATE
    dwell_scale: float = 1.0
    qwp_misalignment: float = 0.0
    seed: int = 0
    start: float = -2e-3
    stop: float = 2e-3
    points: int = 61
    detection_order: str = "p-first"

    def __post_init__(self):
        if not self.peak_rate > 0:
            raise ValueError("peak_rate must be > 0")
        if not self.dwell_scale > 0:
            raise ValueError("dwell_scale must be > 0")
        if self.points < 1:
            raise ValueError("points must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.detection_order not in ("p-first", "s-first"):
            raise ValueError("detection_order must be 'p-first' or 's-first'")

    @property
    def plate_angles(self) -> tuple[float | None, float | None]:
        t1 = None if self.theta1 is None else self.theta1 + self.qwp_misalignment
        return t1, self.theta2

    def positions(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True, eq=False)
class ScanRecord:
    positions: np.ndarray
    coincidences: np.ndarray
    expected: np.ndarray
    seed: int

    def __post_init__(self):
        if not len(self.positions) == len(self.coincidences) == len(self.expected):
            raise ValueError("scan record columns differ in length")

    def __eq__(self, other):
        return (
            isinstance(other, ScanRecord)
            and self.seed == other.seed
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.coincidences, other.coincidences)
            and np.array_equal(self.expected, other.expected)
        )


def expected_counts(cfg: ScanConfig, x) -> np.ndarray:
    """Mean coincidences per dwell at position(s) ``x``."""
    t1, t2 = cfg.plate_angles
    state = prepare(PairSourceSpec(cfg.phi, cfg.mapping), t1, t2)
    # bare double slit peaks at 2 on axis
    return cfg.peak_rate * cfg.dwell_scale * coincidence_pattern(state, cfg.alpha, cfg.geometry, np.atleast_1d(x)) / 2


def point_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def simulate_scan(cfg: ScanConfig) -> ScanRecord:
    xs = cfg.positions()
    mean = expected_counts(cfg, xs)
    counts = np.array([point_rng(cfg.seed, i).poisson(m) for i, m in enumerate(mean)], dtype=np.int64)
    return ScanRecord(xs, counts, mean, cfg.seed)
