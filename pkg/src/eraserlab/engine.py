"""Exact two-photon double-slit eraser.

The full state lives on (slit, s polarization, p polarization), each of
dimension 2.  Slit index 0 is slit 1.  Photon s reaching detector position
x from slit 1 picks up phase e^{i delta(x)} relative to slit 2, both
branches share the single-slit envelope, and the coincidence density is

    envelope(x) * sum_{a,b} |e^{i delta} psi[0,a,b] + psi[1,a,b]|^2

after any projection on p.  This normalization makes the no-element
pattern exactly envelope * (1 + cos delta) and, with orthogonal plates at
theta, theta + 90 deg and a polarizer at alpha, exactly the four-parameter
closed form (see ``closed_form_coincidence``) times the envelope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import optics
from .optics import PairSourceSpec
from .qstate import (
    ATOL,
    ZERO_PROBABILITY,
    StateVector,
    ZeroProbabilityError,
    apply_controlled,
    conditional,
    ket,
    project,
    tensor,
)

SLIT, S_POL, P_POL = 0, 1, 2


@dataclass(frozen=True)
class BenchGeometry:
    """Double-slit bench, all lengths in meters.

    Defaults reproduce the reference bench: 702.2 nm pairs, 200 um slits, the
    slit plane 42 cm and the scanning detector 125 cm from the crystal.
    ``slit_separation`` is center-to-center; the quoted 200 um is read as
    the gap between slit edges, giving 400 um.
    """

    wavelength: float = 702.2e-9
    slit_width: float = 200e-6
    slit_separation: float = 400e-6
    distance: float = 0.83

    def __post_init__(self):
        for name in ("wavelength", "slit_width", "slit_separation", "distance"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive length, got {v!r}")
        if self.slit_separation < self.slit_width:
            raise ValueError(
                f"slit_separation ({self.slit_separation}) < slit_width ({self.slit_width}): slits overlap"
            )

    @property
    def fringe_period(self) -> float:
        return self.wavelength * self.distance / self.slit_separation

    @property
    def envelope_zero(self) -> float:
        return self.wavelength * self.distance / self.slit_width


def delta(x, g: BenchGeometry):
    """Path phase (slit 1 minus slit 2) at transverse position ``x``."""
    return 2 * np.pi * g.slit_separation * np.asarray(x, dtype=float) / (g.wavelength * g.distance)


def envelope(x, g: BenchGeometry):
    """Single-slit Fraunhofer envelope, 1 on axis."""
    # np.sinc(u) = sin(pi u)/(pi u)
    return np.sinc(g.slit_width * np.asarray(x, dtype=float) / (g.wavelength * g.distance)) ** 2


@dataclass(frozen=True)
class EraserState:
    state: StateVector

    def __post_init__(self):
        if self.state.dims != (2, 2, 2):
            raise ValueError(f"eraser state must have dims (2, 2, 2), got {self.state.dims}")

    @property
    def branches(self) -> tuple[np.ndarray, np.ndarray]:
        """Unnormalized (s-pol, p-pol) amplitude blocks behind slit 1 and slit 2."""
        t = self.state.tensor
        return t[0], t[1]

    def slit_probabilities(self) -> tuple[float, float]:
        b1, b2 = self.branches
        w1, w2 = float(np.sum(np.abs(b1) ** 2)), float(np.sum(np.abs(b2) ** 2))
        return w1 / (w1 + w2), w2 / (w1 + w2)


@dataclass(frozen=True)
class MeasurementOutcome:
    """Polarization outcome on one arm.

    ``basis`` is a name from ``optics.BASES`` or an explicit pair of
    orthonormal Jones vectors; ``result`` picks the element.
    """

    arm: Literal["s", "p"]
    basis: str | tuple[StateVector, StateVector]
    result: int

    def __post_init__(self):
        if self.arm not in ("s", "p"):
            raise ValueError(f"arm must be 's' or 'p', got {self.arm!r}")
        if self.result not in (0, 1):
            raise ValueError("result must be 0 or 1")
        if isinstance(self.basis, str) and self.basis not in optics.BASES:
            raise ValueError(f"unknown basis {self.basis!r}; known: {sorted(optics.BASES)}")

    @classmethod
    def named(cls, arm: str, label: str) -> "MeasurementOutcome":
        """Shorthand: ``named('p', 'x')``, ``named('s', 'R')``."""
        for basis, pair in optics.BASES.items():
            for k, v in enumerate(pair):
                if v is optics.BASIS[label]:
                    return cls(arm, basis, k)
        raise ValueError(f"unknown polarization label {label!r}")

    @property
    def vector(self) -> StateVector:
        pair = optics.BASES[self.basis] if isinstance(self.basis, str) else self.basis
        return pair[self.result]


def build_initial(spec: PairSourceSpec = PairSourceSpec()) -> EraserState:
    """Pair state right after the slits: (|s1> + |s2>)/sqrt2 times the source state."""
    return EraserState(tensor(ket(optics.SQRT1_2, optics.SQRT1_2), optics.spdc_state(spec)))


def apply_slit_qwps(state: EraserState, theta1: float | None, theta2: float | None) -> EraserState:
    """Quarter-wave plate ``theta1`` behind slit 1 and ``theta2`` behind slit 2.

    ``None`` means that plate is removed.
    """
    ops = [None if t is None else optics.qwp(t) for t in (theta1, theta2)]
    return EraserState(apply_controlled(ops, state.state, control=SLIT, target=S_POL))


def prepare(
    spec: PairSourceSpec = PairSourceSpec(), theta1: float | None = None, theta2: float | None = None
) -> EraserState:
    return apply_slit_qwps(build_initial(spec), theta1, theta2)


def _polarizer_branch(state: EraserState, alpha: float) -> tuple[StateVector, float]:
    out, prob = project(state.state, optics.polarizer(alpha), P_POL)
    if prob < ZERO_PROBABILITY:
        raise ZeroProbabilityError(prob, f"p polarizer at {np.degrees(alpha):.6g} deg")
    return out, prob


def _path_contract(t: np.ndarray, x, g: BenchGeometry) -> np.ndarray:
    """Detection density at each x for amplitude tensor ``t`` (slit, s, p)."""
    d = np.atleast_1d(delta(x, g))
    phase = np.exp(1j * d)[:, None, None]
    amp = phase * t[0][None] + t[1][None]
    return envelope(np.atleast_1d(x), g) * np.sum(np.abs(amp) ** 2, axis=(1, 2))


def coincidence_pattern(
    state: EraserState, alpha: float | None, g: BenchGeometry, xs: Sequence[float]
) -> np.ndarray:
    """Coincidence density along the scan, polarizer at ``alpha`` or absent.

    Without a polarizer this is the singles pattern of photon s.  The
    delta-average of the envelope-free pattern equals the probability that
    photon p passes the polarizer.
    """
    if alpha is None:
        t = state.state.tensor
    else:
        t = _polarizer_branch(state, alpha)[0].tensor
    return _path_contract(t, xs, g)


def closed_form_coincidence(theta, alpha, phi, delta):
    """1/2 + [1/2 - sin^2(theta+alpha) cos^2(phi/2) - sin^2(theta-alpha) sin^2(phi/2)] sin(delta)."""
    bracket = 0.5 - np.sin(theta + alpha) ** 2 * np.cos(phi / 2) ** 2 - np.sin(theta - alpha) ** 2 * np.sin(phi / 2) ** 2
    return 0.5 + bracket * np.sin(delta)


def condition(state: EraserState, outcome: MeasurementOutcome) -> EraserState:
    """Project one arm's polarization onto ``outcome`` and renormalize."""
    target = S_POL if outcome.arm == "s" else P_POL
    out, _ = conditional(state.state, optics.projector_onto(outcome.vector), target)
    return EraserState(out)


def outcome_probability(state: EraserState, outcome: MeasurementOutcome) -> float:
    target = S_POL if outcome.arm == "s" else P_POL
    return project(state.state, optics.projector_onto(outcome.vector), target)[1]


Order = Literal["p-first", "s-first"]


def pattern_by_ordering(
    state: EraserState, alpha: float, g: BenchGeometry, xs: Sequence[float], order: Order
) -> np.ndarray:
    """Coincidence pattern computed in either detection order.

    p-first: the polarizer outcome prepares a conditional s state, whose
    pattern is weighted by the outcome probability.  s-first: joint
    amplitudes at each x are formed first, then p is projected.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if order == "p-first":
        cond, prob = conditional(state.state, optics.polarizer(alpha), P_POL)
        return prob * _path_contract(cond.tensor, xs, g)
    if order == "s-first":
        # same norm test as p-first so both orders fail identically
        _polarizer_branch(state, alpha)
        t = state.state.tensor
        amp = np.exp(1j * delta(xs, g))[:, None, None] * t[0][None] + t[1][None]
        amp = np.einsum("bq,xaq->xab", optics.polarizer(alpha).matrix, amp)
        return envelope(xs, g) * np.sum(np.abs(amp) ** 2, axis=(1, 2))
    raise ValueError(f"order must be 'p-first' or 's-first', got {order!r}")


def marker_overlap(state: EraserState) -> complex:
    """<m1|m2> of the normalized polarization (s x p) markers of the two slits."""
    b1, b2 = (b.ravel() for b in state.branches)
    n1, n2 = np.linalg.norm(b1), np.linalg.norm(b2)
    return complex(np.vdot(b1, b2) / (n1 * n2))


def which_path_table(state: EraserState, p_labels=("x", "y"), s_labels=("R", "L")) -> list[dict]:
    """Slit probabilities after measuring p then s, for each label pair."""
    rows = []
    for pl in p_labels:
        po = MeasurementOutcome.named("p", pl)
        pp = outcome_probability(state, po)
        cond_p = condition(state, po)
        for sl in s_labels:
            so = MeasurementOutcome.named("s", sl)
            ps = outcome_probability(cond_p, so)
            if ps < ZERO_PROBABILITY:
                p1 = p2 = float("nan")
            else:
                p1, p2 = condition(cond_p, so).slit_probabilities()
            rows.append({"p": pl, "s": sl, "joint_probability": pp * ps, "slit1": p1, "slit2": p2})
    return rows
