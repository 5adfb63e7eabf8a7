"""Simulation and verification toolkit for generalized quantum measurement.

Submodules
----------
linalg          dense complex linear algebra (Jacobi eigensolver, partial trace)
states          pure states, density matrices, projectors, Born rule
measurement     Kraus models, POVMs, sampling, Naimark dilation
decay           photodetected spontaneous emission
bayes           discrete and grid Bayesian inference
discrimination  minimum-error and unambiguous state discrimination
interferometry  two-path interference, eraser, bomb testing, Hardy's paradox
weak            weak values, pointer models, ABL rule
scenarios, cli  scenario tables and the ``qmeas`` command
"""

from __future__ import annotations

from .bayes import CoinData, DiscreteBelief, bayes_update, coin_estimators, grid_posterior, sequential_update
from .decay import DecayModel, decay_kraus, decay_trajectory, fit_decay_rates
from .discrimination import (
    DiscriminationReport,
    StateEnsemble,
    helstrom,
    numeric_usd,
    optimal_usd,
    projective_usd,
    simulate_discrimination,
)
from .errors import QMeasError
from .measurement import MeasurementModel, naimark_dilation, outcome_probabilities, selective_update, validate_povm
from .scenarios import list_scenarios, run_scenario
from .states import DensityMatrix, Projector, PureState, born_probability, project_update, reduced_density
from .weak import PrePostSelection, abl_probability, bayes_weak_value, weak_value

__version__ = "0.1.0"

__all__ = [
    "CoinData",
    "DecayModel",
    "DensityMatrix",
    "DiscreteBelief",
    "DiscriminationReport",
    "MeasurementModel",
    "PrePostSelection",
    "Projector",
    "PureState",
    "QMeasError",
    "StateEnsemble",
    "abl_probability",
    "bayes_update",
    "bayes_weak_value",
    "born_probability",
    "coin_estimators",
    "decay_kraus",
    "decay_trajectory",
    "fit_decay_rates",
    "grid_posterior",
    "helstrom",
    "list_scenarios",
    "naimark_dilation",
    "numeric_usd",
    "optimal_usd",
    "outcome_probabilities",
    "project_update",
    "projective_usd",
    "reduced_density",
    "run_scenario",
    "selective_update",
    "sequential_update",
    "simulate_discrimination",
    "validate_povm",
    "weak_value",
]
