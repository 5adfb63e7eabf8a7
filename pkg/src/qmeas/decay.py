"""Spontaneous emission watched by a photodetector, as a discrete Kraus process.

One step is one detection window in which an excited atom emits (and the
photon is caught) with probability ``eta``. Half a lifetime is a single step
with ``eta = 1/2``; splitting it into ``n`` steps uses
``eta_step = 1 - 2**(-1/n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QMeasError
from .measurement import MeasurementModel, evolve_nonselective
from .states import KET_E, KET_G, DensityMatrix
from . import linalg as la


@dataclass(frozen=True)
class DecayModel:
    eta: float
    steps: int

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise QMeasError(f"eta must lie in [0, 1], got {self.eta}")
        if self.steps < 1:
            raise QMeasError(f"steps must be positive, got {self.steps}")


def eta_per_step(steps_per_half_life: int) -> float:
    """Per-step emission probability so that ``steps_per_half_life`` steps make one half-life."""
    if steps_per_half_life < 1:
        raise QMeasError("steps_per_half_life must be >= 1")
    return float(-np.expm1(-np.log(2.0) / steps_per_half_life))


def decay_kraus(eta: float) -> MeasurementModel:
    """Two-outcome model: ``"no_click"`` (M0) and ``"click"`` (M1).

    M1 = sqrt(eta) |g><e| sends the atom to the ground state; M0 =
    |g><g| + sqrt(1 - eta) |e><e| reweights without destroying coherence.
    """
    if not 0.0 <= eta <= 1.0:
        raise QMeasError(f"eta must lie in [0, 1], got {eta}")
    m0 = la.outer(KET_G) + np.sqrt(1.0 - eta) * la.outer(KET_E)
    m1 = np.sqrt(eta) * la.outer(KET_G, KET_E)
    return MeasurementModel((m0, m1), ("no_click", "click"), tol=1e-12)


def decay_trajectory(rho0: DensityMatrix, model: DecayModel) -> list[DensityMatrix]:
    """States after 0, 1, ..., ``model.steps`` unread detection windows."""
    kraus = decay_kraus(model.eta)
    traj = [rho0]
    for _ in range(model.steps):
        traj.append(evolve_nonselective(traj[-1], kraus))
    return traj


def fit_decay_rates(trajectory: list[DensityMatrix]) -> tuple[float, float]:
    """Per-step exponential rates of the excited population and of ``|rho_ge|``.

    Log-linear least squares over the whole trajectory. The population rate
    is ``1/T1`` and the coherence rate ``1/T2`` in step units, so their
    ratio is ``T2/T1``.
    """
    n = np.arange(len(trajectory), dtype=float)
    pop = np.array([rho.matrix[1, 1].real for rho in trajectory])
    coh = np.array([abs(rho.matrix[0, 1]) for rho in trajectory])
    if np.any(pop <= 0) or np.any(coh <= 0):
        raise QMeasError("population or coherence vanished; cannot fit exponential decay")
    pop_rate = -np.polyfit(n, np.log(pop), 1)[0]
    coh_rate = -np.polyfit(n, np.log(coh), 1)[0]
    return float(pop_rate), float(coh_rate)
