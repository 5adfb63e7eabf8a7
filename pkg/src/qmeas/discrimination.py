"""Minimum-error and unambiguous discrimination of pure states.

Every strategy returns a :class:`DiscriminationReport` whose POVM has one
element per state (in ensemble order) and, for unambiguous strategies, a
final "don't know" element ``E_DK``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import LinearDependenceError, QMeasError
from .linalg import Matrix
from .measurement import sample_outcome_indices, validate_povm
from .states import PureState

USD_STRATEGIES = ("projective_usd", "optimal_usd", "numeric_usd")
GRAM_MIN_EIG = 1e-8
DK_LABEL = "DK"


@dataclass(frozen=True, eq=False)
class StateEnsemble:
    """Pure states with prior probabilities."""

    states: tuple[PureState, ...]
    priors: tuple[float, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        states = tuple(s if isinstance(s, PureState) else PureState(s) for s in self.states)
        if not states:
            raise QMeasError("ensemble needs at least one state")
        if len({s.dim for s in states}) != 1:
            raise QMeasError("ensemble states must share a dimension")
        priors = tuple(float(p) for p in self.priors) if self.priors else (1.0 / len(states),) * len(states)
        if len(priors) != len(states):
            raise QMeasError(f"{len(priors)} priors for {len(states)} states")
        if any(p < 0 for p in priors) or abs(sum(priors) - 1.0) > 1e-12:
            raise QMeasError(f"priors must be non-negative and sum to 1, got {priors}")
        if self.labels:
            labels = tuple(str(x) for x in self.labels)
        else:
            labels = ("a", "b") if len(states) == 2 else tuple(str(i) for i in range(len(states)))
        if len(labels) != len(states) or len(set(labels)) != len(labels) or DK_LABEL in labels:
            raise QMeasError(f"invalid state labels {labels}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self) -> int:
        return len(self.states)

    def gram(self) -> Matrix:
        """``G_jk = <psi_j|psi_k>``."""
        kets = self.kets()
        return la.dagger(kets) @ kets

    def kets(self) -> Matrix:
        """States as the columns of a ``dim x n`` matrix."""
        return np.column_stack([s.amplitudes for s in self.states])


@dataclass(frozen=True, eq=False)
class DiscriminationReport:
    strategy: str
    povm: tuple[Matrix, ...]
    labels: tuple[str, ...]
    p_success: float
    p_error: float
    p_inconclusive: float
    metadata: dict = field(default_factory=dict)

    def confusion(self, ensemble: StateEnsemble) -> np.ndarray:
        """``C[k, j] = Tr(E_j rho_k)``: outcome probabilities per true state."""
        return np.array([[np.vdot(s.amplitudes, e @ s.amplitudes).real for e in self.povm] for s in ensemble.states])


def _finish(strategy: str, ensemble: StateEnsemble, povm: Sequence[Matrix], metadata: dict) -> DiscriminationReport:
    povm = tuple(validate_povm(povm, tol=1e-9))
    n = len(ensemble)
    labels = ensemble.labels + ((DK_LABEL,) if len(povm) == n + 1 else ())
    conf = np.clip(DiscriminationReport(strategy, povm, labels, 0, 0, 0).confusion(ensemble), 0.0, 1.0)
    priors = np.array(ensemble.priors)
    p_success = float(priors @ np.diag(conf[:, :n]))
    p_inconclusive = float(priors @ conf[:, n]) if len(povm) == n + 1 else 0.0
    p_error = max(0.0, 1.0 - p_success - p_inconclusive)
    return DiscriminationReport(strategy, povm, labels, p_success, p_error, p_inconclusive, metadata)


def _require_pair(ensemble: StateEnsemble) -> tuple[np.ndarray, np.ndarray]:
    if len(ensemble) != 2:
        raise QMeasError(f"this strategy discriminates exactly 2 states, got {len(ensemble)}")
    return ensemble.states[0].amplitudes, ensemble.states[1].amplitudes


def _require_equal_priors(ensemble: StateEnsemble) -> None:
    if max(ensemble.priors) - min(ensemble.priors) > 1e-12:
        raise QMeasError("unambiguous discrimination is implemented for equal priors only")


def helstrom(ensemble: StateEnsemble) -> DiscriminationReport:
    """Minimum-error measurement for two states with arbitrary priors.

    Projects onto the non-negative and negative eigenspaces of
    ``p1 rho1 - p2 rho2``; for equal priors the error is
    ``(1 - sqrt(1 - |<a|b>|^2)) / 2``.
    """
    a, b = _require_pair(ensemble)
    p1, p2 = ensemble.priors
    gamma = p1 * la.outer(a) - p2 * la.outer(b)
    evals, vecs = la.eig_hermitian(gamma)
    pos = vecs[:, evals > 0]
    e_a = pos @ la.dagger(pos)
    e_b = np.eye(ensemble.dim) - e_a
    trace_norm = float(np.sum(np.abs(evals)))
    return _finish("helstrom", ensemble, (e_a, e_b), {"trace_norm": trace_norm})


def _orthogonal_part(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Component of ``v`` orthogonal to the unit vector ``w``."""
    return v - np.vdot(w, v) * w


def projective_usd(ensemble: StateEnsemble) -> DiscriminationReport:
    """Certify the first state by projecting onto the complement of the second.

    A click on ``|b_perp>`` (the part of ``|a>`` orthogonal to ``|b>``) proves
    the input was ``|a>``; every other result is inconclusive. Success is
    ``(1 - |<a|b>|^2)/2`` with equal priors. Certifying ``|b>`` instead is the
    mirror-image strategy with the same success rate.
    """
    a, b = _require_pair(ensemble)
    _require_equal_priors(ensemble)
    b_perp = _orthogonal_part(a, b)
    norm = np.linalg.norm(b_perp)
    d = ensemble.dim
    e_a = la.outer(b_perp / norm) if norm > 1e-12 else np.zeros((d, d), dtype=complex)
    e_b = np.zeros((d, d), dtype=complex)
    meta = {"certified": ensemble.labels[0], "alternative": f"certify {ensemble.labels[1]!r} symmetrically"}
    return _finish("projective_usd", ensemble, (e_a, e_b, np.eye(d) - e_a), meta)


def optimal_usd(ensemble: StateEnsemble) -> DiscriminationReport:
    """Optimal unambiguous discrimination of two equiprobable states.

    ``E_a = kappa |b_perp><b_perp|``, ``E_b = kappa |a_perp><a_perp|`` with the
    largest ``kappa`` keeping ``E_DK`` positive, ``kappa = 1/(1 + |<a|b>|)``.
    The success probability is ``1 - |<a|b>|``.
    """
    a, b = _require_pair(ensemble)
    _require_equal_priors(ensemble)
    a_perp, b_perp = _orthogonal_part(b, a), _orthogonal_part(a, b)
    na, nb = np.linalg.norm(a_perp), np.linalg.norm(b_perp)
    if min(na, nb) <= 1e-12:
        raise LinearDependenceError("states are parallel; unambiguous discrimination is impossible")
    pa, pb = la.outer(b_perp / nb), la.outer(a_perp / na)
    kappa = 1.0 / la.eig_hermitian(pa + pb)[0][-1]
    e_a, e_b = kappa * pa, kappa * pb
    e_dk = np.eye(ensemble.dim) - e_a - e_b
    return _finish("optimal_usd", ensemble, (e_a, e_b, e_dk), {"kappa": float(kappa)})


def _reciprocal_directions(ensemble: StateEnsemble) -> tuple[Matrix, np.ndarray]:
    """Unit vectors ``u_k`` orthogonal to every state but ``psi_k``, and ``|<u_k|psi_k>|^2``."""
    gram = ensemble.gram()
    lam = la.eig_hermitian(gram)[0][0]
    if lam <= GRAM_MIN_EIG:
        raise LinearDependenceError(f"states are linearly dependent (Gram min eigenvalue {lam:.3e})")
    recip = ensemble.kets() @ np.linalg.inv(gram)
    norms = np.linalg.norm(recip, axis=0)
    return recip / norms, 1.0 / norms**2


def _is_symmetric(ensemble: StateEnsemble) -> bool:
    gram = ensemble.gram()
    off = gram[~np.eye(len(ensemble), dtype=bool)]
    equal_priors = max(ensemble.priors) - min(ensemble.priors) <= 1e-12
    return equal_priors and (off.size == 0 or np.max(np.abs(off - off[0])) <= 1e-12)


def _slack(u: Matrix, c: np.ndarray) -> Matrix:
    return np.eye(u.shape[0]) - (u * c) @ la.dagger(u)


def _max_feasible_step(u: Matrix, c: np.ndarray, step: np.ndarray) -> float:
    """Largest ``t`` in (0, 1] (times 0.99) keeping ``c + t*step`` strictly inside the feasible cone."""
    t = 1.0
    neg = step < 0
    if np.any(neg):
        t = min(t, 0.99 * float(np.min(-c[neg] / step[neg])))
    while t > 1e-16:
        try:
            np.linalg.cholesky(_slack(u, c + t * step))
            return t
        except np.linalg.LinAlgError:
            t *= 0.5
    return 0.0


def _barrier_usd(u: Matrix, gain: np.ndarray, gap_tol: float, max_newton: int) -> tuple[np.ndarray, dict]:
    """Maximize ``gain . c`` subject to ``I - sum_k c_k u_k u_k^dagger >= 0``, ``c >= 0``.

    Log-barrier path following with damped Newton steps. At an exact central
    point ``Z = mu S^{-1}`` is dual feasible with ``Tr Z - gain . c =
    mu (d + n)``, which is reported as the gap bound. The gap is not
    recomputed from ``S^{-1}`` because ``S`` is nearly singular at the end.
    """
    n, d = len(gain), u.shape[0]
    c = np.full(n, 1.0 / (2 * n))
    mu = float(np.max(gain))
    newton_steps = 0

    def objective(cv, m):
        _, logdet = np.linalg.slogdet(_slack(u, cv))
        return gain @ cv + m * (logdet + np.sum(np.log(cv)))

    while True:
        for _ in range(max_newton):
            s_inv = np.linalg.inv(_slack(u, c))
            q = la.dagger(u) @ s_inv @ u
            grad = gain - mu * np.real(np.diag(q)) + mu / c
            hess = -mu * np.abs(q) ** 2 - np.diag(mu / c**2)
            step = -np.linalg.solve(hess, grad)
            decrement = float(grad @ step)
            newton_steps += 1
            if decrement <= 1e-12 * mu:
                break
            t = _max_feasible_step(u, c, step)
            f0 = objective(c, mu)
            while t > 1e-16 and objective(c + t * step, mu) < f0 + 0.25 * t * float(grad @ step):
                t *= 0.5
            c = c + t * step
        if mu * (d + n) <= gap_tol:
            break
        mu *= 0.2
    cert = {
        "method": "barrier",
        "gap_bound": mu * (d + n),
        "centering_decrement": decrement / mu,
        "newton_steps": newton_steps,
        "dk_min_eigenvalue": float(la.eig_hermitian(_slack(u, c))[0][0]),
    }
    return c, cert


def numeric_usd(
    ensemble: StateEnsemble,
    gap_tol: float = 1e-11,
    max_newton: int = 50,
    symmetric_shortcut: bool = True,
) -> DiscriminationReport:
    """Optimal unambiguous discrimination of ``n`` linearly independent states.

    Each conclusive element is ``E_k = c_k |u_k><u_k|`` with ``u_k`` the
    normalized reciprocal-basis vector, which is orthogonal to every other
    state, so no conclusive outcome can be wrong. The scales ``c`` maximize
    the average success subject to ``E_DK = I - sum E_k`` being positive.

    Parameters
    ----------
    gap_tol : float
        Target duality gap of the barrier solver.
    symmetric_shortcut : bool
        If the states have a permutation-invariant Gram matrix (and equal
        priors), use the equal-scale optimum ``c = 1/lambda_max`` directly.

    Notes
    -----
    ``metadata`` holds the optimality certificate: the barrier gap bound and
    final centering decrement, and in every case the smallest eigenvalue of
    ``E_DK`` (near zero means the PSD boundary is active).
    """
    _require_equal_priors(ensemble)
    u, overlap = _reciprocal_directions(ensemble)
    gain = np.array(ensemble.priors) * overlap
    if symmetric_shortcut and _is_symmetric(ensemble):
        lam_max = la.eig_hermitian((u @ la.dagger(u)))[0][-1]
        c = np.full(len(ensemble), 1.0 / lam_max)
        cert = {"method": "symmetric", "dk_min_eigenvalue": float(la.eig_hermitian(_slack(u, c))[0][0])}
    else:
        c, cert = _barrier_usd(u, gain, gap_tol, max_newton)
    elements = [ck * la.outer(u[:, k]) for k, ck in enumerate(c)]
    e_dk = np.eye(ensemble.dim) - sum(elements)
    cert["scales"] = [float(x) for x in c]
    return _finish("numeric_usd", ensemble, (*elements, e_dk), cert)


@dataclass(frozen=True)
class SampledOutcomes:
    n_correct: int
    n_error: int
    n_inconclusive: int

    @property
    def total(self) -> int:
        return self.n_correct + self.n_error + self.n_inconclusive


def simulate_discrimination(
    report: DiscriminationReport, ensemble: StateEnsemble, rng: np.random.Generator, n_samples: int
) -> SampledOutcomes:
    """Monte Carlo: draw true states by prior, then measurement outcomes by Born rule."""
    n = len(ensemble)
    truth = sample_outcome_indices(np.array(ensemble.priors), rng, n_samples)
    conf = np.clip(report.confusion(ensemble), 0.0, None)
    outcome = np.empty(n_samples, dtype=int)
    for k in range(n):
        mask = truth == k
        outcome[mask] = sample_outcome_indices(conf[k] / conf[k].sum(), rng, int(mask.sum()))
    conclusive = outcome < n
    correct = int(np.sum(conclusive & (outcome == truth)))
    wrong = int(np.sum(conclusive & (outcome != truth)))
    return SampledOutcomes(correct, wrong, n_samples - correct - wrong)
