"""Dense pure-state algebra over small tensor-product spaces.

Amplitudes are laid out row-major over ``dims``, so subsystem 0 is the
slowest-varying index.  The eraser uses the fixed ordering
(slit path, s polarization, p polarization).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# Algebraic identities (single products, projections).
ATOL = 1e-12
# Composed chains (QWP -> projection -> path contraction).
PIPELINE_ATOL = 1e-9
# Branch probabilities below this are treated as impossible.
ZERO_PROBABILITY = 1e-14


class EraserError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatchError(EraserError, ValueError):
    pass


class ZeroProbabilityError(EraserError):
    """A conditional state was requested for a branch that never occurs."""

    def __init__(self, probability: float, what: str = "branch"):
        self.probability = probability
        super().__init__(f"zero-probability-branch: {what} has probability {probability:.3e}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        dims = tuple(int(d) for d in self.dims)
        if int(np.prod(dims)) != amps.size:
            raise DimensionMismatchError(f"dims {dims} do not match {amps.size} amplitudes")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_list(cls, amplitudes: Sequence[complex], dims: Sequence[int] | None = None) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        return cls(amps, tuple(dims) if dims is not None else (amps.size,))

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem (read-only view)."""
        return self.amplitudes.reshape(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, atol: float = ATOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= atol

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n**2 < ZERO_PROBABILITY:
            raise ZeroProbabilityError(n**2, "state norm")
        return StateVector(self.amplitudes / n, self.dims)

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        if self.dims != other.dims:
            raise DimensionMismatchError(f"{self.dims} vs {other.dims}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def scaled(self, factor: complex) -> "StateVector":
        return StateVector(self.amplitudes * factor, self.dims)

    def allclose(self, other: "StateVector", atol: float = ATOL) -> bool:
        return self.dims == other.dims and bool(np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=atol))

    def __repr__(self) -> str:
        return f"StateVector(dims={self.dims}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Square matrix acting on a single subsystem.

    ``unitary`` is a checked tag: construction fails if the matrix is not
    unitary to ``ATOL``.
    """

    matrix: np.ndarray
    unitary: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)
        if self.unitary and not is_unitary(m):
            raise ValueError(f"operator {self.name or ''} tagged unitary but U^dag U != I")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "LinearOperator":
        return LinearOperator(self.matrix.conj().T, unitary=self.unitary, name=f"{self.name}^dag")

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.matrix @ other.matrix, unitary=self.unitary and other.unitary)


def is_unitary(m: np.ndarray, atol: float = ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= atol)


def is_projector(m: np.ndarray, atol: float = ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m @ m - m)) <= atol and np.max(np.abs(m - m.conj().T)) <= atol)


def ket(*amplitudes: complex) -> StateVector:
    return StateVector.from_list(amplitudes)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)


def tensor_all(*states: StateVector) -> StateVector:
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def _check_target(op: LinearOperator, state: StateVector, target: int) -> None:
    if not 0 <= target < len(state.dims):
        raise DimensionMismatchError(f"subsystem {target} out of range for dims {state.dims}")
    if op.dim != state.dims[target]:
        raise DimensionMismatchError(
            f"operator of dim {op.dim} cannot act on subsystem {target} of dim {state.dims[target]}"
        )


def apply(op: LinearOperator, state: StateVector, target: int) -> StateVector:
    """Return (I x ... x op x ... x I)|state> with ``op`` on subsystem ``target``."""
    _check_target(op, state, target)
    t = np.tensordot(op.matrix, state.tensor, axes=([1], [target]))
    return StateVector(np.moveaxis(t, 0, target), state.dims)


def apply_controlled(
    ops: Sequence[LinearOperator | None], state: StateVector, control: int, target: int
) -> StateVector:
    """Apply ``ops[k]`` to ``target`` within the branch where ``control`` == k.

    ``None`` leaves that branch untouched.  This is how per-slit elements
    act only on light passing through their own slit.
    """
    if control == target:
        raise DimensionMismatchError("control and target must differ")
    if len(ops) != state.dims[control]:
        raise DimensionMismatchError(f"need {state.dims[control]} branch operators, got {len(ops)}")
    t = np.array(state.tensor)
    for k, op in enumerate(ops):
        if op is None:
            continue
        _check_target(op, state, target)
        branch = np.take(t, k, axis=control)
        # target axis index shifts down by one once the control axis is removed
        tgt = target - 1 if target > control else target
        moved = np.moveaxis(np.tensordot(op.matrix, branch, axes=([1], [tgt])), 0, tgt)
        idx = [slice(None)] * t.ndim
        idx[control] = k
        t[tuple(idx)] = moved
    return StateVector(t, state.dims)


def project(state: StateVector, projector: LinearOperator, target: int) -> tuple[StateVector, float]:
    """Apply an orthogonal projector without renormalizing.

    Returns the projected vector and ``||P psi||^2 / ||psi||^2``.
    """
    if not is_projector(projector.matrix):
        raise ValueError("projector must be Hermitian and idempotent")
    out = apply(projector, state, target)
    total = state.norm() ** 2
    if total == 0.0:
        raise ZeroProbabilityError(0.0, "input state")
    prob = min(max(out.norm() ** 2 / total, 0.0), 1.0)
    return out, prob


def conditional(state: StateVector, projector: LinearOperator, target: int) -> tuple[StateVector, float]:
    """Projected and renormalized state, plus its probability."""
    out, prob = project(state, projector, target)
    if prob < ZERO_PROBABILITY:
        raise ZeroProbabilityError(prob)
    return out.scaled(1.0 / np.sqrt(prob * state.norm() ** 2)), prob


def marginal_probabilities(state: StateVector, target: int) -> np.ndarray:
    """Computational-basis outcome probabilities of one subsystem."""
    p = np.abs(state.tensor) ** 2
    axes = tuple(i for i in range(len(state.dims)) if i != target)
    p = p.sum(axis=axes)
    return p / p.sum()
