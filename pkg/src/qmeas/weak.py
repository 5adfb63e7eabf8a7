"""Weak values, von Neumann pointers, and pre/post-selected statistics.

Units: hbar = 1. A coupling of strength ``G`` displaces a pointer by
``G * a`` in position for system eigenvalue ``a``.

The pointer lives on a uniform periodic grid ``x_k = x_min + k dx``
(``x_max`` excluded). Momentum expectations use the discrete Fourier
transform, ``p = 2 pi * fftfreq(n, dx)``; this is faithful only while the
packets stay well inside the grid, which the norm-leakage check enforces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .bayes import DiscreteBelief, bayes_update
from .errors import (
    ContradictionError,
    DimensionError,
    GridTooSmallError,
    ImpossibleOutcomeError,
    NotHermitianError,
    OrthogonalSelectionError,
    QMeasError,
)
from .interferometry import hardy_evolution, hardy_joint_ket
from .linalg import Matrix
from .states import IMPOSSIBLE_PROB, Projector, PureState, project_update, pure_to_density

OVERLAP_THRESHOLD = 1e-10
LEAKAGE_TOL = 1e-6
MIN_POSTSELECTION = 1e-14
DEFAULT_POINTER_POINTS = 2048
DEFAULT_HALF_WIDTH_SIGMAS = 12.0


@dataclass(frozen=True, eq=False)
class GaussianPointer:
    """Gaussian pointer ``psi(x) ∝ exp(-x^2 / (4 sigma^2))`` on a periodic grid.

    ``sigma`` is the position spread, ``<x^2> = sigma^2``.
    """

    x_min: float
    x_max: float
    n_points: int
    sigma: float

    def __post_init__(self):
        if not self.x_max > self.x_min or self.n_points < 8 or self.sigma <= 0:
            raise QMeasError("need x_max > x_min, n_points >= 8, sigma > 0")

    @classmethod
    def default(cls, sigma: float = 1.0, max_shift: float = 0.0, n_points: int = DEFAULT_POINTER_POINTS):
        """Grid spanning ``±(12 sigma + max_shift)``."""
        half = DEFAULT_HALF_WIDTH_SIGMAS * sigma + abs(max_shift)
        return cls(-half, half, n_points, sigma)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points, endpoint=False)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    def _norm_constant(self) -> float:
        base = np.exp(-self.x**2 / (2 * self.sigma**2))
        return 1.0 / np.sqrt(np.sum(base) * self.dx)

    @property
    def wavefunction(self) -> np.ndarray:
        return self.shifted(0.0)

    def shifted(self, shift: float) -> np.ndarray:
        """``psi(x - shift)`` with the unshifted normalization.

        Raises
        ------
        GridTooSmallError
            If more than ``1e-6`` of the norm falls outside the grid.
        """
        psi = self._norm_constant() * np.exp(-((self.x - shift) ** 2) / (4 * self.sigma**2))
        kept = float(np.sum(np.abs(psi) ** 2) * self.dx)
        if 1.0 - kept > LEAKAGE_TOL:
            raise GridTooSmallError(
                f"packet shifted by {shift:.4g} keeps only {kept:.8f} of its norm on [{self.x_min}, {self.x_max})"
            )
        return psi.astype(complex)


@dataclass(frozen=True, eq=False)
class PrePostSelection:
    initial: PureState
    final: PureState

    def __post_init__(self):
        i = self.initial if isinstance(self.initial, PureState) else PureState(self.initial)
        f = self.final if isinstance(self.final, PureState) else PureState(self.final)
        if i.dim != f.dim:
            raise DimensionError(f"pre-selection has dimension {i.dim}, post-selection {f.dim}")
        object.__setattr__(self, "initial", i)
        object.__setattr__(self, "final", f)

    @property
    def overlap(self) -> complex:
        """``<f|i>``."""
        return self.final.inner(self.initial)


@dataclass(frozen=True)
class WeakValue:
    value: complex
    overlap: complex
    postselection_prob: float


@dataclass(frozen=True)
class CouplingSpec:
    G: float

    def __post_init__(self):
        if not np.isfinite(self.G):
            raise QMeasError("coupling strength must be finite")


def _hermitian(a: Matrix, dim: int) -> np.ndarray:
    a = la.as_matrix(a)
    if a.shape != (dim, dim):
        raise DimensionError(f"observable has shape {a.shape}, states have dimension {dim}")
    dev = la.hermiticity_deviation(a)
    if dev > la.DEFAULT_TOL:
        raise NotHermitianError(dev, la.DEFAULT_TOL)
    return a


def weak_value(a: Matrix, sel: PrePostSelection, threshold: float = OVERLAP_THRESHOLD) -> WeakValue:
    """``<f|A|i> / <f|i>``.

    Raises
    ------
    OrthogonalSelectionError
        If ``|<f|i>|`` is below ``threshold``; carries ``<f|A|i>``.
    """
    a = _hermitian(a, sel.initial.dim)
    overlap = sel.overlap
    numerator = complex(np.vdot(sel.final.amplitudes, a @ sel.initial.amplitudes))
    if abs(overlap) < threshold:
        raise OrthogonalSelectionError(abs(overlap), numerator, threshold)
    return WeakValue(numerator / overlap, overlap, abs(overlap) ** 2)


def _check_orthonormal_basis(basis: Sequence[PureState], dim: int) -> np.ndarray:
    vecs = np.column_stack([(b if isinstance(b, PureState) else PureState(b)).amplitudes for b in basis])
    if vecs.shape != (dim, dim):
        raise QMeasError(f"final basis must have {dim} vectors of dimension {dim}, got shape {vecs.shape}")
    if np.max(np.abs(la.dagger(vecs) @ vecs - np.eye(dim))) > 1e-9:
        raise QMeasError("final basis is not orthonormal and complete")
    return vecs


def weak_value_sum_terms(a: Matrix, initial: PureState, final_basis: Sequence[PureState]) -> np.ndarray:
    """``|<f|i>|^2 a_w(f) = <i|f><f|A|i>`` for each basis vector ``f``.

    Written without dividing by ``<f|i>``, so basis vectors orthogonal to
    ``|i>`` contribute zero instead of raising.
    """
    dim = initial.dim
    a = _hermitian(a, dim)
    vecs = _check_orthonormal_basis(final_basis, dim)
    f_i = la.dagger(vecs) @ initial.amplitudes
    f_a_i = la.dagger(vecs) @ (a @ initial.amplitudes)
    return np.conj(f_i) * f_a_i


def weak_value_sum_rule(a: Matrix, initial: PureState, final_basis: Sequence[PureState]) -> float:
    """Postselection-weighted average ``sum_f |<f|i>|^2 Re a_w(f)``; equals ``<i|A|i>``."""
    return float(np.sum(weak_value_sum_terms(a, initial, final_basis)).real)


@dataclass(frozen=True, eq=False)
class JointPointerState:
    """System (x) pointer amplitudes, ``amplitudes[s, k]`` for system index ``s`` and grid point ``k``."""

    amplitudes: np.ndarray
    pointer: GaussianPointer

    @property
    def unconditioned_density(self) -> np.ndarray:
        """Pointer position density with the system traced out."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    @property
    def unconditioned_mean_x(self) -> float:
        rho = self.unconditioned_density
        return float(np.sum(self.pointer.x * rho) / np.sum(rho))


def pointer_couple_exact(
    pointer: GaussianPointer, system: PureState, a: Matrix, coupling: CouplingSpec
) -> JointPointerState:
    """Exact von Neumann coupling ``exp(-i G A p)``.

    Expands the system in eigenvectors of ``A`` and displaces the pointer
    rigidly by ``G a_k`` on each branch:
    ``sum_k c_k |a_k> (x) psi(x - G a_k)``.
    """
    a = _hermitian(a, system.dim)
    evals, vecs = la.eig_hermitian(a)
    coeffs = la.dagger(vecs) @ system.amplitudes
    joint = np.zeros((system.dim, pointer.n_points), dtype=complex)
    for k in range(system.dim):
        if coeffs[k] == 0:
            continue
        joint += np.outer(coeffs[k] * vecs[:, k], pointer.shifted(coupling.G * evals[k]))
    return JointPointerState(joint, pointer)


@dataclass(frozen=True, eq=False)
class PostselectedPointer:
    wavefunction: np.ndarray
    mean_x: float
    mean_p: float
    p_select: float


def pointer_momenta(pointer: GaussianPointer) -> np.ndarray:
    return 2 * np.pi * np.fft.fftfreq(pointer.n_points, pointer.dx)


def pointer_postselect(joint: JointPointerState, final: PureState) -> PostselectedPointer:
    """Project the system onto ``|f>`` and summarize the conditional pointer."""
    ptr = joint.pointer
    if final.dim != joint.amplitudes.shape[0]:
        raise DimensionError("post-selection state does not match the system dimension")
    phi = final.amplitudes.conj() @ joint.amplitudes
    p_select = float(np.sum(np.abs(phi) ** 2) * ptr.dx)
    if p_select <= MIN_POSTSELECTION:
        raise ImpossibleOutcomeError(f"post-selection probability {p_select:.3e} is effectively zero")
    phi = phi / np.sqrt(p_select)
    dens = np.abs(phi) ** 2
    mean_x = float(np.sum(ptr.x * dens) * ptr.dx)
    spec = np.abs(np.fft.fft(phi)) ** 2
    mean_p = float(np.sum(pointer_momenta(ptr) * spec) / np.sum(spec))
    return PostselectedPointer(phi, mean_x, mean_p, p_select)


def packet_overlap(shift_difference: float, sigma: float) -> float:
    """``<psi(x - s1)|psi(x - s2)>`` for Gaussian packets: ``exp(-(s1 - s2)^2 / (8 sigma^2))``."""
    return float(np.exp(-(shift_difference**2) / (8 * sigma**2)))


def is_weak_regime(a: Matrix, coupling: CouplingSpec, sigma: float, ratio: float = 50.0) -> bool:
    """``G * (a_max - a_min) <= sigma / ratio``."""
    evals = la.eig_hermitian(a)[0]
    return abs(coupling.G) * (evals[-1] - evals[0]) <= sigma / ratio


def _check_projective_family(projectors: Sequence[Projector | Matrix], dim: int) -> list[Projector]:
    projs = [p if isinstance(p, Projector) else Projector(p) for p in projectors]
    if any(p.dim != dim for p in projs):
        raise DimensionError("projector dimension does not match the states")
    if np.max(np.abs(sum(p.matrix for p in projs) - np.eye(dim))) > 1e-9:
        raise QMeasError("projectors do not sum to the identity")
    for j, p in enumerate(projs):
        for q in projs[j + 1 :]:
            if np.max(np.abs(p.matrix @ q.matrix)) > 1e-9:
                raise QMeasError("projectors are not mutually orthogonal")
    return projs


def abl_probability(sel: PrePostSelection, projectors: Sequence[Projector | Matrix]) -> np.ndarray:
    """Strong intermediate measurement statistics conditioned on pre- and post-selection.

    Simulated directly: measure the projector family on ``|i>``, then treat
    success of the final projection onto ``|f>`` as the observation in a
    Bayesian update over which projector fired.

    Raises
    ------
    ContradictionError
        If post-selection is impossible whichever projector fires.
    """
    dim = sel.initial.dim
    projs = _check_projective_family(projectors, dim)
    rho = pure_to_density(sel.initial)
    final = Projector.onto(sel.final.amplitudes)
    priors, likelihoods = [], []
    for p in projs:
        prob = float(np.trace(p.matrix @ rho.matrix).real)
        if prob <= IMPOSSIBLE_PROB:
            priors.append(0.0)
            likelihoods.append(0.0)
            continue
        post, prob = project_update(rho, p)
        priors.append(prob)
        likelihoods.append(float(np.trace(final.matrix @ post.matrix).real))
    total = sum(priors)
    prior = DiscreteBelief(tuple(str(j) for j in range(len(projs))), tuple(x / total for x in priors))
    try:
        posterior = bayes_update(prior, likelihoods)
    except ContradictionError:
        raise ContradictionError("post-selection has zero probability for every intermediate outcome") from None
    return np.array(posterior.probs, dtype=float)


def bayes_weak_value(a: Matrix, sel: PrePostSelection, threshold: float = OVERLAP_THRESHOLD) -> complex:
    """Weak value rebuilt as a conditional expectation over the spectrum of ``A``.

    ``sum_j a_j <P_f P_j>_i / <P_f>_i``, where ``<P_f P_j>_i = <i|f><f|P_j|i>``
    is the time-ordered joint term and ``P_j`` are the spectral projectors.
    """
    a = _hermitian(a, sel.initial.dim)
    i, f = sel.initial.amplitudes, sel.final.amplitudes
    p_f = abs(sel.overlap) ** 2
    if np.sqrt(p_f) < threshold:
        raise OrthogonalSelectionError(np.sqrt(p_f), complex(np.vdot(f, a @ i)), threshold)
    i_f = np.vdot(i, f)
    total = 0j
    for value, proj in la.spectral_projectors(a):
        total += value * i_f * np.vdot(f, proj @ i)
    return complex(total / p_f)


# three-box scenarios: boxes are the basis (A, B, C) or (A', B, C')

def three_box_selection() -> PrePostSelection:
    """``|i> = (|A> + |B>)/sqrt(2)``, ``|f> = (|B> + |C>)/sqrt(2)``."""
    return PrePostSelection(PureState.normalized([1, 1, 0]), PureState.normalized([0, 1, 1]))


def extended_three_box_selection() -> PrePostSelection:
    """``|i> = (|A'> + |B> + |C'>)/sqrt(3)``, ``|f> = (|A'> + |B> - |C'>)/sqrt(3)``."""
    return PrePostSelection(PureState.normalized([1, 1, 1]), PureState.normalized([1, 1, -1]))


def box_projectors(n: int = 3) -> list[Projector]:
    return [Projector.onto(la.basis_ket(n, k)) for k in range(n)]


@dataclass(frozen=True)
class HardyWeakTable:
    """Weak-valued occupations given postselection on both dark detectors.

    ``singles`` is keyed by ``"O+"``, ``"I+"``, ``"O-"``, ``"I-"``;
    ``joints[(p, e)]`` by positron and electron arm. ``table`` holds the
    joints with positron rows ``(O+, I+)`` and electron columns ``(O-, I-)``.
    """

    singles: dict
    joints: dict
    table: np.ndarray


def hardy_weak_table() -> HardyWeakTable:
    psi = hardy_evolution().pure_state()
    f = PureState(hardy_joint_ket("D", "D"))
    sel = PrePostSelection(psi, f)
    arms = {"O": la.basis_ket(2, 0), "I": la.basis_ket(2, 1)}

    def projector(pos: str | None, ele: str | None) -> np.ndarray:
        p_pos = la.outer(arms[pos]) if pos else np.eye(2)
        p_ele = la.outer(arms[ele]) if ele else np.eye(2)
        out = np.zeros((5, 5), dtype=complex)
        out[:4, :4] = np.kron(p_pos, p_ele)
        return out

    def real_weak(m: np.ndarray) -> float:
        w = weak_value(m, sel).value
        if abs(w.imag) > 1e-12:
            raise QMeasError(f"expected a real weak value, got {w}")
        return float(w.real)

    joints = {(p + "+", e + "-"): real_weak(projector(p, e)) for p in "OI" for e in "OI"}
    singles = {p + "+": real_weak(projector(p, None)) for p in "OI"}
    singles.update({e + "-": real_weak(projector(None, e)) for e in "OI"})
    table = np.array([[joints[(p + "+", e + "-")] for e in "OI"] for p in "OI"])
    return HardyWeakTable(singles, joints, table)
