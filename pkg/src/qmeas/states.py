"""Pure and mixed states, projective updates, and subsystem reduction.

Basis conventions (used everywhere in the package):

* atom: ``|g> = (1, 0)``, ``|e> = (0, 1)``
* field register: ``|0> = (1, 0)`` (no photon), ``|1> = (0, 1)`` (one photon)
* composite atom+field kets are ``kron(atom, field)``, so ``|e0>`` sits at
  index 2 and ``|g1>`` at index 1.

Pure states are compared as rays (``|<phi|psi>| = 1``); global phase is
never significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .errors import DimensionError, ImpossibleOutcomeError, InvalidProjectorError, InvalidStateError, QMeasError
from .linalg import DEFAULT_TOL, DimSpec, Matrix

NORM_TOL = 1e-8
PROB_CLAMP = 1e-10
IMPOSSIBLE_PROB = 1e-12

KET_G = la.basis_ket(2, 0)
KET_E = la.basis_ket(2, 1)
KET_0 = la.basis_ket(2, 0)
KET_1 = la.basis_ket(2, 1)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


def clamp_probability(p: float, what: str = "probability") -> float:
    """Clamp rounding noise into [0, 1]; anything further out is a bug."""
    p = float(np.real(p))
    if p < -PROB_CLAMP or p > 1.0 + PROB_CLAMP:
        raise QMeasError(f"{what} = {p!r} lies outside [0, 1] beyond rounding tolerance")
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized ket. Use :meth:`normalized` to build one from raw amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.size == 0 or not np.all(np.isfinite(amps)):
            raise InvalidStateError("amplitudes must be a non-empty finite vector")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state is not normalized: <psi|psi> = {norm2!r}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def normalized(cls, amplitudes: Iterable[complex]) -> "PureState":
        amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidStateError("cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def inner(self, other: "PureState") -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def same_ray(self, other: "PureState", tol: float = DEFAULT_TOL) -> bool:
        return self.dim == other.dim and abs(abs(self.inner(other)) - 1.0) <= tol

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, PSD operator; optionally annotated with a DimSpec."""

    matrix: Matrix
    dims: DimSpec | None = None
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        m = la.as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        dev = la.hermiticity_deviation(m)
        if dev > self.tol:
            raise InvalidStateError(f"density matrix not Hermitian (deviation {dev:.3e})")
        m = 0.5 * (m + la.dagger(m))
        tr = np.trace(m).real
        if abs(tr - 1.0) > self.tol:
            raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
        lam = la.min_eigenvalue(m, self.tol)
        if lam < -self.tol:
            raise InvalidStateError(f"density matrix not PSD (min eigenvalue {lam:.3e})")
        dims = (m.shape[0],) if self.dims is None else la.check_dims(self.dims, m.shape[0])
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, op: Matrix) -> complex:
        op = np.asarray(op)
        if op.shape != self.matrix.shape:
            raise DimensionError(f"operator shape {op.shape} does not match state dimension {self.dim}")
        return complex(np.trace(self.matrix @ op))

    def with_dims(self, dims: Sequence[int]) -> "DensityMatrix":
        return DensityMatrix(self.matrix, tuple(dims))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector (Hermitian and idempotent), possibly of rank > 1."""

    matrix: Matrix

    def __post_init__(self):
        m = la.as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"projector must be square, got {m.shape}")
        if la.hermiticity_deviation(m) > DEFAULT_TOL:
            raise InvalidProjectorError("projector is not Hermitian")
        if np.max(np.abs(m @ m - m)) > DEFAULT_TOL:
            raise InvalidProjectorError("projector is not idempotent (P^2 != P)")
        object.__setattr__(self, "matrix", _frozen(0.5 * (m + la.dagger(m))))

    @classmethod
    def onto(cls, *kets) -> "Projector":
        """Projector onto the span of the given kets (need not be orthonormal)."""
        cols = np.column_stack([np.asarray(k, dtype=complex).ravel() for k in kets])
        q, r = np.linalg.qr(cols)
        keep = np.abs(np.diag(r)) > 1e-12
        q = q[:, keep]
        return cls(q @ la.dagger(q))

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(np.eye(dim))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))


def pure_to_density(psi: PureState | np.ndarray, dims: Sequence[int] | None = None) -> DensityMatrix:
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    return DensityMatrix(la.outer(psi.amplitudes), None if dims is None else tuple(dims))


def ket_density(*amplitudes, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Shorthand: density matrix of the normalized ket with these amplitudes."""
    return pure_to_density(PureState.normalized(amplitudes), dims)


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim) / dim)


def mix(components: Sequence[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Probability-weighted mixture ``sum_m P_m rho_m``."""
    if not components:
        raise QMeasError("mix() needs at least one component")
    probs = np.array([float(p) for p, _ in components])
    if np.any(probs < 0):
        raise QMeasError("mixture probabilities must be non-negative")
    if abs(probs.sum() - 1.0) > DEFAULT_TOL:
        raise QMeasError(f"mixture probabilities sum to {probs.sum()!r}, expected 1")
    dims = {rho.dims for _, rho in components}
    if len({rho.dim for _, rho in components}) != 1:
        raise DimensionError("all mixture components must share a dimension")
    m = sum(p * rho.matrix for p, (_, rho) in zip(probs, components))
    return DensityMatrix(m, dims.pop() if len(dims) == 1 else None)


def _check_same_dim(rho: DensityMatrix, op_dim: int, what: str) -> None:
    if rho.dim != op_dim:
        raise DimensionError(f"{what} dimension {op_dim} does not match state dimension {rho.dim}")


def born_probability(rho: DensityMatrix, p: Projector) -> float:
    """``Tr(rho P)``, clamped to [0, 1]."""
    _check_same_dim(rho, p.dim, "projector")
    return clamp_probability(np.trace(rho.matrix @ p.matrix), "Born probability")


def project_update(rho: DensityMatrix, p: Projector) -> tuple[DensityMatrix, float]:
    """Condition on the projector's outcome: ``(P rho P / prob, prob)``."""
    prob = born_probability(rho, p)
    if prob <= IMPOSSIBLE_PROB:
        raise ImpossibleOutcomeError(f"outcome has probability {prob:.3e}; cannot condition on it")
    post = p.matrix @ rho.matrix @ p.matrix / prob
    return DensityMatrix(post, rho.dims), prob


def dephase(rho: DensityMatrix, projectors: Sequence[Projector]) -> DensityMatrix:
    """Non-selective projective measurement ``sum_j P_j rho P_j``."""
    m = sum(p.matrix @ rho.matrix @ p.matrix for p in projectors)
    return DensityMatrix(m, rho.dims)


def purity(rho: DensityMatrix) -> float:
    """``Tr(rho^2)``."""
    return float(np.real(np.vdot(rho.matrix, rho.matrix)))


def reduced_density(rho: DensityMatrix, keep: int | Sequence[int]) -> DensityMatrix:
    """Partial trace over every factor of ``rho.dims`` except ``keep``."""
    red = la.partial_trace(rho.matrix, rho.dims, keep)
    keep_idx = [keep] if isinstance(keep, (int, np.integer)) else sorted(keep)
    return DensityMatrix(red, tuple(rho.dims[k] for k in keep_idx))


def bloch_vector(rho: DensityMatrix) -> np.ndarray:
    """Bloch vector (x, y, z) of a qubit with ``|e>`` at the north pole.

    z = rho_ee - rho_gg, x = 2 Re rho_eg, y = 2 Im rho_eg; the ground state is
    the south pole (0, 0, -1).
    """
    if rho.dim != 2:
        raise DimensionError("Bloch vectors are defined for qubits only")
    m = rho.matrix
    return np.array([2 * m[1, 0].real, 2 * m[1, 0].imag, (m[1, 1] - m[0, 0]).real])


def fidelity_pure(rho: DensityMatrix, psi: PureState) -> float:
    """``<psi|rho|psi>``; equals ``|<psi|phi>|^2`` when rho is pure."""
    v = psi.amplitudes
    return clamp_probability(np.vdot(v, rho.matrix @ v), "fidelity")
