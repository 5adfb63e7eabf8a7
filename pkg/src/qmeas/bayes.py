"""Discrete Bayesian updating and coin-bias posteriors.

Discrete updates are written in plain Python arithmetic so that
``fractions.Fraction`` inputs give exact posteriors; floats work the same
way. Continuous posteriors live on a grid and are accumulated in log space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.special import xlog1py, xlogy

from .errors import ContradictionError, QMeasError

DISCRETE_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteBelief:
    """Probabilities over named hypotheses."""

    labels: tuple[str, ...]
    probs: tuple

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        probs = tuple(self.probs)
        if len(labels) != len(probs):
            raise QMeasError(f"{len(labels)} labels for {len(probs)} probabilities")
        if len(set(labels)) != len(labels):
            raise QMeasError(f"hypothesis labels must be unique, got {labels}")
        if any(p < 0 for p in probs):
            raise QMeasError("probabilities must be non-negative")
        if abs(sum(probs) - 1) > DISCRETE_TOL:
            raise QMeasError(f"probabilities sum to {sum(probs)!r}, expected 1")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, labels: Sequence[str]) -> "DiscreteBelief":
        return cls(tuple(labels), tuple(Fraction(1, len(labels)) for _ in labels))

    def __getitem__(self, label: str):
        return self.probs[self.labels.index(label)]

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.probs))


def bayes_update(prior: DiscreteBelief, likelihoods: Sequence) -> DiscreteBelief:
    """Posterior proportional to ``prior_i * likelihood_i``.

    Raises
    ------
    ContradictionError
        If every product is zero, i.e. the observation is impossible under
        every hypothesis with nonzero prior.
    """
    likes = tuple(likelihoods)
    if len(likes) != len(prior.probs):
        raise QMeasError(f"{len(likes)} likelihoods for {len(prior.probs)} hypotheses")
    if any(x < 0 for x in likes):
        raise QMeasError("likelihoods must be non-negative")
    joint = [p * x for p, x in zip(prior.probs, likes)]
    total = sum(joint)
    if total == 0:
        raise ContradictionError("observation has zero probability under every hypothesis")
    return DiscreteBelief(prior.labels, tuple(j / total for j in joint))


def sequential_update(prior: DiscreteBelief, observations: Iterable[Sequence]) -> DiscreteBelief:
    """Fold :func:`bayes_update` over a sequence of likelihood vectors."""
    belief = prior
    for likes in observations:
        belief = bayes_update(belief, likes)
    return belief


@dataclass(frozen=True)
class CoinData:
    heads: int
    tosses: int

    def __post_init__(self):
        if self.heads < 0 or self.tosses < 0 or self.heads > self.tosses:
            raise QMeasError(f"need 0 <= heads <= tosses, got H={self.heads}, N={self.tosses}")


def binomial_log_likelihood(data: CoinData, p) -> np.ndarray:
    """``H log p + (N - H) log(1 - p)``, with ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=float)
    return xlogy(data.heads, p) + xlog1py(data.tosses - data.heads, -p)


def binomial_likelihood(data: CoinData) -> Callable:
    """Unnormalized likelihood ``p**H * (1 - p)**(N - H)`` as a function of ``p``."""

    def likelihood(p):
        return np.exp(binomial_log_likelihood(data, p))

    return likelihood


@dataclass(frozen=True, eq=False)
class GridPosterior:
    """Density sampled on a grid, with the quadrature weights that integrate it.

    The flat prior uses the closed grid with trapezoid weights; the Bures
    prior uses a midpoint grid (endpoints excluded) with midpoint weights.
    """

    grid: np.ndarray
    density: np.ndarray
    weights: np.ndarray

    def integrate(self, f: Callable | np.ndarray) -> float:
        values = f(self.grid) if callable(f) else np.asarray(f)
        return float(np.sum(self.weights * self.density * values))

    @property
    def mean(self) -> float:
        return self.integrate(self.grid)

    @property
    def mode(self) -> float:
        return float(self.grid[int(np.argmax(self.density))])


def _trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    h = np.diff(grid)
    w = np.zeros_like(grid)
    w[:-1] += h / 2
    w[1:] += h / 2
    return w


def grid_posterior(data: CoinData, prior_kind: str = "flat", grid_size: int = 1001) -> GridPosterior:
    """Posterior density of the heads probability on a uniform grid over [0, 1].

    Parameters
    ----------
    prior_kind : {"flat", "bures"}
        ``"bures"`` is the density proportional to ``1/sqrt(p(1-p))``, whose
        posterior mean is ``(H + 1/2)/(N + 1)``.
    grid_size : int
        Number of grid points, at least 101.
    """
    if grid_size < 101:
        raise QMeasError(f"grid_size must be >= 101, got {grid_size}")
    if prior_kind == "flat":
        grid = np.linspace(0.0, 1.0, grid_size)
        weights = _trapezoid_weights(grid)
        log_prior = np.zeros_like(grid)
    elif prior_kind == "bures":
        grid = (np.arange(grid_size) + 0.5) / grid_size
        weights = np.full(grid_size, 1.0 / grid_size)
        log_prior = -0.5 * (np.log(grid) + np.log1p(-grid))
    else:
        raise QMeasError(f"prior_kind must be 'flat' or 'bures', got {prior_kind!r}")
    log_post = binomial_log_likelihood(data, grid) + log_prior
    density = np.exp(log_post - log_post.max())
    density /= np.sum(weights * density)
    return GridPosterior(grid, density, weights)


@dataclass(frozen=True)
class CoinEstimates:
    """Point estimates of a coin's heads probability.

    ``mle`` and ``naive_stderr`` are ``None`` when no tosses were observed.
    """

    mle: Optional[float]
    mean_flat: float
    mean_bures: float
    naive_stderr: Optional[float]


def coin_estimators(data: CoinData) -> CoinEstimates:
    h, n = data.heads, data.tosses
    mle = h / n if n > 0 else None
    stderr = float(np.sqrt(mle * (1 - mle) / n)) if n > 0 else None
    return CoinEstimates(mle=mle, mean_flat=(h + 1) / (n + 2), mean_bures=(h + 0.5) / (n + 1), naive_stderr=stderr)
