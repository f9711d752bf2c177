"""Visibility, fringe fits, which-path distinguishability and CHSH."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.optimize import minimize

from .engine import BenchGeometry, EraserState, delta, envelope, marker_overlap
from .qstate import EraserError, StateVector

if TYPE_CHECKING:
    from .scan import ScanRecord


class DegeneratePatternError(EraserError):
    pass


class FitFailedError(EraserError):
    pass


@dataclass(frozen=True)
class VisibilityFit:
    offset: float
    amplitude: float
    phase: float
    visibility: float
    rms_residual: float


def visibility_exact(pattern: Sequence[float]) -> float:
    """(max - min) / (max + min) of a sampled pattern."""
    p = np.asarray(pattern, dtype=float)
    hi, lo = float(p.max()), float(p.min())
    if hi + lo < 1e-14:
        raise DegeneratePatternError("pattern max + min is zero")
    return (hi - lo) / (hi + lo)


def fit_sinusoid(deltas, values, weights=None) -> VisibilityFit:
    """Least-squares fit of values ~ w * (offset + amplitude * sin(delta + phase)).

    ``weights`` (default 1) multiply the whole model; pass the diffraction
    envelope here.  The model is linear in (offset, A cos phase, A sin phase),
    so the fit is a single lstsq solve.
    """
    d = np.asarray(deltas, dtype=float)
    y = np.asarray(values, dtype=float)
    w = np.ones_like(d) if weights is None else np.asarray(weights, dtype=float)
    if d.size < 3:
        raise FitFailedError("need at least 3 points")
    design = np.column_stack([w, w * np.sin(d), w * np.cos(d)])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3 or not np.all(np.isfinite(coef)):
        raise FitFailedError(f"design matrix rank {rank} < 3; scan must span a fringe")
    resid = y - design @ coef
    c0 = np.linalg.lstsq(w[:, None], y, rcond=None)[0]
    const_ss = float(np.sum((y - w * c0[0]) ** 2))
    ss = float(np.sum(resid**2))
    # rounding slack: a flat pattern fits both models equally well
    if ss > const_ss + 1e-12 * float(np.sum(y**2)):
        raise FitFailedError("fit did not improve on the constant model")
    offset, a_cos, a_sin = (float(c) for c in coef)
    if offset <= 0:
        raise FitFailedError(f"non-positive fitted offset {offset:.3g}")
    amplitude = float(np.hypot(a_cos, a_sin))
    phase = float(np.arctan2(a_sin, a_cos))
    vis = min(max(amplitude / offset, 0.0), 1.0)
    return VisibilityFit(offset, amplitude, phase, vis, float(np.sqrt(ss / y.size)))


def fit_pattern(xs, values, g: BenchGeometry) -> VisibilityFit:
    """Fringe fit along a detector scan with the envelope fixed by geometry."""
    return fit_sinusoid(delta(xs, g), values, envelope(xs, g))


def fit_fringes(scan: "ScanRecord", g: BenchGeometry) -> VisibilityFit:
    xs = np.asarray(scan.positions, dtype=float)
    if xs.size < 8:
        raise FitFailedError("need at least 8 scan points")
    if np.ptp(xs) < g.fringe_period:
        raise FitFailedError("scan spans less than one fringe period")
    return fit_pattern(xs, scan.coincidences, g)


def bootstrap_spread(scan: "ScanRecord", g: BenchGeometry, n_boot: int = 200, seed: int = 0) -> tuple[float, float]:
    """Parametric-bootstrap standard deviations of (visibility, phase).

    Counts are redrawn as Poisson around the fitted curve.  Visibility is
    taken without the [0, 1] clamp so its spread is not truncated at V = 1.
    """
    fit = fit_fringes(scan, g)
    xs = np.asarray(scan.positions, dtype=float)
    d, w = delta(xs, g), envelope(xs, g)
    model = w * (fit.offset + fit.amplitude * np.sin(d + fit.phase))
    rng = np.random.Generator(np.random.PCG64(seed))
    vs, phases = [], []
    for _ in range(n_boot):
        f = fit_sinusoid(d, rng.poisson(np.clip(model, 0, None)), w)
        vs.append(f.amplitude / f.offset)
        phases.append(np.remainder(f.phase - fit.phase + np.pi, 2 * np.pi) - np.pi)
    return float(np.std(vs, ddof=1)), float(np.std(phases, ddof=1))


def bootstrap_visibility(scan: "ScanRecord", g: BenchGeometry, n_boot: int = 200, seed: int = 0) -> float:
    return bootstrap_spread(scan, g, n_boot, seed)[0]


def distinguishability(state: EraserState) -> float:
    """Trace distance between the two slits' polarization markers."""
    ov = abs(marker_overlap(state))
    return float(np.sqrt(max(0.0, 1.0 - ov * ov)))


def singles_visibility(state: EraserState) -> float:
    """Visibility of photon s alone, 2|<psi1|psi2>| / (|psi1|^2 + |psi2|^2)."""
    b1, b2 = (b.ravel() for b in state.branches)
    return float(2 * abs(np.vdot(b1, b2)) / (np.vdot(b1, b1).real + np.vdot(b2, b2).real))


def _polarizer_rows(angle: float) -> np.ndarray:
    """Transmitted and blocked Jones vectors of a polarizer, as rows."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, s], [-s, c]])


def correlation(state: StateVector, a: float, b: float) -> float:
    """E(a, b) = P(same) - P(different) for linear polarizers at a (s) and b (p)."""
    if state.dims != (2, 2):
        raise ValueError("correlation needs a two-photon (2, 2) state")
    ba, bb = _polarizer_rows(a), _polarizer_rows(b)
    psi = state.tensor
    # outcome probabilities p[i, j] for polarizer outcomes i on s and j on p
    p = np.abs(ba @ psi @ bb.T) ** 2
    total = p.sum()
    e = p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0]
    return float(e / total)


def chsh(state: StateVector, angles: Sequence[float]) -> float:
    """|E(a,b) - E(a,b') + E(a',b) + E(a',b')| for angles (a, a', b, b')."""
    a, a2, b, b2 = angles
    return abs(correlation(state, a, b) - correlation(state, a, b2) + correlation(state, a2, b) + correlation(state, a2, b2))


def optimize_chsh(state: StateVector, starts: int = 4) -> tuple[float, tuple[float, float, float, float]]:
    """Maximize the CHSH value over linear-polarizer angles.

    Deterministic: a coarse grid seeds BFGS refinements and the best result
    is kept.
    """
    grid = np.radians(np.arange(0.0, 180.0, 22.5))
    coarse = sorted(
        ((chsh(state, c), c) for c in itertools.product(grid, repeat=4)),
        key=lambda t: -t[0],
    )[:starts]
    best = (-1.0, (0.0, 0.0, 0.0, 0.0))
    for _, c in coarse:
        res = minimize(lambda v: -chsh(state, v), np.array(c), method="BFGS", options={"gtol": 1e-12})
        val = chsh(state, res.x)
        if val > best[0]:
            best = (val, tuple(float(v) for v in np.mod(res.x, np.pi)))
    return best
