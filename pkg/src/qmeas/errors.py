"""Exception hierarchy shared by every qmeas module."""

from __future__ import annotations


class QMeasError(ValueError):
    """Base class for all qmeas validation and numerical errors."""


class DimensionError(QMeasError):
    """Operand shapes or subsystem dimensions are inconsistent."""


class NotHermitianError(QMeasError):
    """A matrix expected to be Hermitian deviates beyond tolerance."""

    def __init__(self, deviation: float, tol: float):
        super().__init__(f"matrix is not Hermitian: max|m - m^dagger| = {deviation:.3e} > tol {tol:.1e}")
        self.deviation = deviation
        self.tol = tol


class InvalidStateError(QMeasError):
    """A state violates normalization, Hermiticity, or positivity."""


class InvalidProjectorError(QMeasError):
    """An operator claimed to be a projector is not idempotent or Hermitian."""


class IncompleteModelError(QMeasError):
    """Kraus operators (or POVM elements) do not resolve the identity."""


class InvalidPOVMError(QMeasError):
    """A POVM element is not PSD or the set is not complete."""


class ImpossibleOutcomeError(QMeasError):
    """Conditioning on an outcome whose probability is (numerically) zero."""


class ContradictionError(QMeasError):
    """Bayesian update left no posterior mass on any hypothesis."""


class LinearDependenceError(QMeasError):
    """States cannot be unambiguously discriminated (Gram matrix singular)."""


class OrthogonalSelectionError(QMeasError):
    """Pre- and post-selected states are orthogonal, so the weak value is undefined."""

    def __init__(self, overlap: float, numerator: complex, threshold: float):
        super().__init__(
            f"|<f|i>| = {overlap:.3e} below threshold {threshold:.1e}; "
            f"numerator |<f|A|i>| = {abs(numerator):.3e}"
        )
        self.overlap = overlap
        self.numerator = numerator


class GridTooSmallError(QMeasError):
    """A displaced pointer packet leaks out of the position grid."""
