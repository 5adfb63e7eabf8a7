"""Kraus measurement models, POVMs, sampling, and Naimark dilation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import DimensionError, ImpossibleOutcomeError, IncompleteModelError, InvalidPOVMError, QMeasError
from .linalg import DEFAULT_TOL, Matrix
from .states import IMPOSSIBLE_PROB, DensityMatrix, Projector, clamp_probability


def _frozen(m) -> np.ndarray:
    arr = np.array(m, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """An ordered set of Kraus operators ``M_i`` with ``sum M_i^dagger M_i = I``.

    Outcomes are addressed either by position or by label.
    """

    kraus: tuple[Matrix, ...]
    labels: tuple[str, ...] = ()
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if len(self.kraus) == 0:
            raise IncompleteModelError("a measurement model needs at least one Kraus operator")
        ops = tuple(_frozen(la.as_matrix(k)) for k in self.kraus)
        dim = ops[0].shape[1]
        for k in ops:
            if k.shape != (dim, dim):
                raise DimensionError(f"Kraus operators must all be {dim}x{dim}, got {k.shape}")
        labels = tuple(str(x) for x in self.labels) if self.labels else tuple(str(i) for i in range(len(ops)))
        if len(labels) != len(ops):
            raise QMeasError(f"{len(labels)} labels given for {len(ops)} Kraus operators")
        if len(set(labels)) != len(labels):
            raise QMeasError(f"outcome labels must be unique, got {labels}")
        total = sum(la.dagger(k) @ k for k in ops)
        dev = float(np.max(np.abs(total - np.eye(dim))))
        if dev > self.tol:
            raise IncompleteModelError(f"sum of M_i^dagger M_i deviates from identity by {dev:.3e}")
        object.__setattr__(self, "kraus", ops)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def projective(cls, projectors: Sequence[Projector | Matrix], labels: Sequence[str] = ()) -> "MeasurementModel":
        mats = [p.matrix if isinstance(p, Projector) else p for p in projectors]
        return cls(tuple(mats), tuple(labels))

    @classmethod
    def computational(cls, dim: int) -> "MeasurementModel":
        return cls.projective([la.outer(la.basis_ket(dim, i)) for i in range(dim)])

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[1]

    def __len__(self) -> int:
        return len(self.kraus)

    def index(self, outcome: int | str) -> int:
        if isinstance(outcome, str):
            try:
                return self.labels.index(outcome)
            except ValueError:
                raise QMeasError(f"unknown outcome label {outcome!r}; labels are {self.labels}") from None
        if not 0 <= outcome < len(self.kraus):
            raise QMeasError(f"outcome index {outcome} out of range for {len(self.kraus)} outcomes")
        return int(outcome)

    def twisted(self, unitaries: Sequence[Matrix]) -> "MeasurementModel":
        """Left-multiply each Kraus operator by a unitary; the POVM is unchanged."""
        return MeasurementModel(tuple(u @ k for u, k in zip(unitaries, self.kraus)), self.labels, self.tol)


def validate_povm(elements: Sequence[Matrix], tol: float = DEFAULT_TOL) -> list[Matrix]:
    """Check each element is Hermitian PSD and that they sum to the identity.

    Returns the elements as complex arrays; raises :class:`InvalidPOVMError`
    naming the violated invariant otherwise.
    """
    els = [la.as_matrix(e) for e in elements]
    if not els:
        raise InvalidPOVMError("POVM has no elements")
    dim = els[0].shape[0]
    for i, e in enumerate(els):
        if e.shape != (dim, dim):
            raise InvalidPOVMError(f"element {i} has shape {e.shape}, expected {(dim, dim)}")
        dev = la.hermiticity_deviation(e)
        if dev > tol:
            raise InvalidPOVMError(f"element {i} is not Hermitian (deviation {dev:.3e})")
        lam = la.min_eigenvalue(e, tol)
        if lam < -tol:
            raise InvalidPOVMError(f"element {i} is not PSD (min eigenvalue {lam:.3e})")
    dev = float(np.max(np.abs(sum(els) - np.eye(dim))))
    if dev > tol:
        raise InvalidPOVMError(f"elements do not sum to the identity (deviation {dev:.3e})")
    return els


def povm_from_kraus(model: MeasurementModel) -> list[Matrix]:
    """``E_i = M_i^dagger M_i`` for each outcome."""
    return [la.dagger(k) @ k for k in model.kraus]


def _check_dims(rho: DensityMatrix, model: MeasurementModel) -> None:
    if rho.dim != model.dim:
        raise DimensionError(f"model acts on dimension {model.dim}, state has dimension {rho.dim}")


def outcome_probabilities(rho: DensityMatrix, model: MeasurementModel) -> np.ndarray:
    """``P_i = Tr(E_i rho)`` for every outcome, clamped to [0, 1]."""
    _check_dims(rho, model)
    return np.array([clamp_probability(np.trace(e @ rho.matrix)) for e in povm_from_kraus(model)])


def selective_update(
    rho: DensityMatrix, model: MeasurementModel, outcome: int | str
) -> tuple[DensityMatrix, float]:
    """Post-measurement state ``M_i rho M_i^dagger / P_i`` and ``P_i``."""
    _check_dims(rho, model)
    i = model.index(outcome)
    m = model.kraus[i]
    unnorm = m @ rho.matrix @ la.dagger(m)
    prob = clamp_probability(np.trace(unnorm))
    if prob <= IMPOSSIBLE_PROB:
        raise ImpossibleOutcomeError(f"outcome {model.labels[i]!r} has probability {prob:.3e}")
    return DensityMatrix(unnorm / prob, rho.dims), prob


def evolve_nonselective(rho: DensityMatrix, model: MeasurementModel) -> DensityMatrix:
    """Average over unread outcomes: ``sum_i M_i rho M_i^dagger``."""
    _check_dims(rho, model)
    return DensityMatrix(sum(m @ rho.matrix @ la.dagger(m) for m in model.kraus), rho.dims)


def _cdf(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return cdf


def sample_outcome(
    rho: DensityMatrix, model: MeasurementModel, rng: np.random.Generator
) -> tuple[str, DensityMatrix]:
    """Draw one outcome by inverse-CDF sampling and return it with the updated state."""
    probs = outcome_probabilities(rho, model)
    i = int(np.searchsorted(_cdf(probs), rng.random(), side="right"))
    i = min(i, len(probs) - 1)
    state, _ = selective_update(rho, model, i)
    return model.labels[i], state


def sample_outcome_indices(probs: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized inverse-CDF sampling of outcome indices from a probability vector."""
    probs = np.asarray(probs, dtype=float)
    idx = np.searchsorted(_cdf(probs), rng.random(size), side="right")
    return np.minimum(idx, len(probs) - 1)


@dataclass(frozen=True, eq=False)
class NaimarkDilation:
    """Isometry ``V: H_sys -> H_sys (x) H_anc`` plus ancilla-indexed projectors.

    ``V |psi> = sum_i (sqrt(E_i) |psi>) (x) |i>``; outcome ``i`` corresponds to
    the projector ``I (x) |i><i|`` on the dilated space.
    """

    isometry: Matrix
    system_dim: int
    ancilla_dim: int
    projectors: tuple[Projector, ...]

    @property
    def dims(self) -> tuple[int, int]:
        return (self.system_dim, self.ancilla_dim)

    def dilate(self, rho: DensityMatrix) -> DensityMatrix:
        v = self.isometry
        return DensityMatrix(v @ rho.matrix @ la.dagger(v), self.dims)

    def probabilities(self, rho: DensityMatrix) -> np.ndarray:
        big = self.dilate(rho)
        return np.array([clamp_probability(np.trace(p.matrix @ big.matrix)) for p in self.projectors])


def naimark_dilation(povm: Sequence[Matrix], tol: float = DEFAULT_TOL) -> NaimarkDilation:
    """Realize a POVM as a projective ancilla measurement after an isometry.

    Uses the principal square root of each element as its Kraus operator.
    The isometry is not completed to a unitary.
    """
    els = validate_povm(povm, tol)
    d, k = els[0].shape[0], len(els)
    roots = [la.psd_sqrt(e, tol) for e in els]
    v = sum(np.kron(r, la.basis_ket(k, i).reshape(k, 1)) for i, r in enumerate(roots))
    dev = float(np.max(np.abs(la.dagger(v) @ v - np.eye(d))))
    if dev > tol:
        raise InvalidPOVMError(f"dilation is not an isometry (deviation {dev:.3e})")
    projs = tuple(Projector(np.kron(np.eye(d), la.outer(la.basis_ket(k, i)))) for i in range(k))
    return NaimarkDilation(v, d, k, projs)
