"""Jones-calculus elements and the down-conversion pair source.

Angles are radians measured counter-clockwise from the x axis.  Under the
default labeling the crystal's ordinary axis is x, so every angle here is
also an angle from the o axis.

Phase conventions are pinned to the eraser algebra rather than to an external
optics convention:

* |R> = (|x> - i|y>)/sqrt(2) and |L> = (|x> + i|y>)/sqrt(2), which is what
  ((1-i)/2)(|+> + i|->) and ((1-i)/2)(i|+> + |->) expand to.
* ``qwp(theta)`` is the unit-determinant retarder
  R(theta) diag(e^{i pi/4}, e^{-i pi/4}) R(theta)^T.  With it, a plate at
  +45 deg sends |x> -> |L>, |y> -> i|R>, and a plate at -45 deg sends
  |x> -> |R>, |y> -> -i|L>, exactly as the which-path marking requires.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import ATOL, LinearOperator, StateVector

SQRT1_2 = 1.0 / np.sqrt(2.0)

# Global phase of qwp() relative to R diag(1, -i) R^T.  Both plates carry
# it, so it never shows up in fringe positions; recorded so nobody "fixes" it.
QWP_GLOBAL_PHASE = np.exp(1j * np.pi / 4)

X = StateVector.from_list([1, 0])
Y = StateVector.from_list([0, 1])
PLUS = StateVector.from_list([SQRT1_2, SQRT1_2])
MINUS = StateVector.from_list([SQRT1_2, -SQRT1_2])
R = StateVector((1 - 1j) / 2 * (PLUS.amplitudes + 1j * MINUS.amplitudes), (2,))
L = StateVector((1 - 1j) / 2 * (1j * PLUS.amplitudes + MINUS.amplitudes), (2,))

BASIS = {"x": X, "y": Y, "+": PLUS, "-": MINUS, "R": R, "L": L}

# Named two-outcome measurement bases: outcome 0 first.
BASES = {
    "linear": (X, Y),
    "diagonal": (PLUS, MINUS),
    "circular": (R, L),
}


def linear(angle: float) -> StateVector:
    """Linear polarization at ``angle`` from x."""
    return StateVector.from_list([np.cos(angle), np.sin(angle)])


def linear_basis(angle: float) -> tuple[StateVector, StateVector]:
    """Transmitted and blocked states of a polarizer set at ``angle``."""
    return linear(angle), linear(angle + np.pi / 2)


def rotation(angle: float) -> LinearOperator:
    c, s = np.cos(angle), np.sin(angle)
    return LinearOperator(np.array([[c, -s], [s, c]]), unitary=True, name=f"rot({angle:.4g})")


def retarder(fast_axis: float, retardance: float) -> LinearOperator:
    """Unit-determinant linear retarder.

    The axis at ``fast_axis`` gets phase e^{+i retardance/2}, the orthogonal
    axis e^{-i retardance/2}.
    """
    rot = rotation(fast_axis).matrix
    d = np.diag([np.exp(0.5j * retardance), np.exp(-0.5j * retardance)])
    return LinearOperator(rot @ d @ rot.T, unitary=True, name=f"ret({fast_axis:.4g},{retardance:.4g})")


def qwp(theta: float) -> LinearOperator:
    """Quarter-wave plate with its fast axis at ``theta``."""
    op = retarder(theta, np.pi / 2)
    return LinearOperator(op.matrix, unitary=True, name=f"qwp({np.degrees(theta):.6g}deg)")


def hwp(theta: float) -> LinearOperator:
    op = retarder(theta, np.pi)
    return LinearOperator(op.matrix, unitary=True, name=f"hwp({np.degrees(theta):.6g}deg)")


def polarizer(alpha: float) -> LinearOperator:
    """Ideal linear polarizer, transmission axis at ``alpha``."""
    c, s = np.cos(alpha), np.sin(alpha)
    return LinearOperator(np.array([[c * c, s * c], [s * c, s * s]]), name=f"pol({np.degrees(alpha):.6g}deg)")


def projector_onto(v: StateVector) -> LinearOperator:
    """|v><v| for a unit Jones vector ``v``."""
    a = v.amplitudes
    return LinearOperator(np.outer(a, a.conj()), name="proj")


# o/e -> x/y labelings
MAPPINGS = ("o=x,e=y", "o=y,e=x")


@dataclass(frozen=True)
class PairSourceSpec:
    """Type-II down-conversion source (1/sqrt2)(|o>_s|e>_p + e^{i phi}|e>_s|o>_p)."""

    phi: float = 0.0
    mapping: str = "o=x,e=y"

    def __post_init__(self):
        if not np.isfinite(self.phi):
            raise ValueError("phi must be finite")
        if self.mapping not in MAPPINGS:
            raise ValueError(f"mapping must be one of {MAPPINGS}, got {self.mapping!r}")

    @property
    def bell_state(self) -> str | None:
        """'Psi+' at phi = 0, 'Psi-' at phi = pi (mod 2 pi), else None."""
        r = np.mod(self.phi, 2 * np.pi)
        if min(r, 2 * np.pi - r) <= ATOL:
            return "Psi+"
        if abs(r - np.pi) <= ATOL:
            return "Psi-"
        return None


def spdc_state(spec: PairSourceSpec = PairSourceSpec()) -> StateVector:
    """Two-photon polarization state, dims (s, p)."""
    o, e = (X, Y) if spec.mapping == "o=x,e=y" else (Y, X)
    amps = (np.kron(o.amplitudes, e.amplitudes) + np.exp(1j * spec.phi) * np.kron(e.amplitudes, o.amplitudes)) * SQRT1_2
    return StateVector(amps, (2, 2))
