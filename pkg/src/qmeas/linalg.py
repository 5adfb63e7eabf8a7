"""Dense complex linear algebra for small Hilbert spaces.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; kets
are 1-D arrays. Subsystem structure is described by a ``DimSpec``, an
ordered tuple of factor dimensions whose product is the matrix dimension
(first factor is the most significant index, matching ``numpy.kron``).

The Hermitian eigensolver is a cyclic complex Jacobi iteration. It is
slower than LAPACK but has no failure modes on the tiny, often highly
degenerate matrices this package works with.
"""

from __future__ import annotations

import string
from typing import Sequence

import numpy as np

from .errors import DimensionError, NotHermitianError, QMeasError

Matrix = np.ndarray
DimSpec = tuple[int, ...]

DEFAULT_TOL = 1e-9
JACOBI_THRESHOLD = 1e-12
JACOBI_MAX_SWEEPS = 100


def as_matrix(m) -> Matrix:
    """Coerce to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got array with shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise QMeasError("matrix contains NaN or Inf entries")
    return arr


def _require_square(m: Matrix, what: str = "matrix") -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {m.shape}")
    return m.shape[0]


def dagger(m: Matrix) -> Matrix:
    """Conjugate transpose."""
    return np.conj(np.asarray(m)).T


def matmul(a: Matrix, b: Matrix) -> Matrix:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product, ``a``'s indices major."""
    return np.kron(a, b)


def kron_all(*factors: Matrix) -> Matrix:
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def trace(m: Matrix) -> complex:
    m = np.asarray(m)
    _require_square(m)
    return complex(np.trace(m))


def check_dims(dims: Sequence[int], dim: int) -> DimSpec:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d <= 0 for d in dims):
        raise DimensionError(f"DimSpec factors must be positive, got {dims}")
    if int(np.prod(dims)) != dim:
        raise DimensionError(f"DimSpec {dims} has product {int(np.prod(dims))}, matrix dimension is {dim}")
    return dims


def partial_trace(m: Matrix, dims: Sequence[int], keep: int | Sequence[int]) -> Matrix:
    """Trace out every factor of ``dims`` not listed in ``keep``.

    Kept factors appear in ascending index order in the result.
    """
    m = np.asarray(m, dtype=complex)
    dim = _require_square(m)
    dims = check_dims(dims, dim)
    n = len(dims)
    keep_set = sorted({keep} if isinstance(keep, (int, np.integer)) else {int(k) for k in keep})
    if not keep_set or any(k < 0 or k >= n for k in keep_set):
        raise DimensionError(f"keep={keep!r} is not a valid factor index for DimSpec {dims}")
    if n > 26:
        raise DimensionError("at most 26 tensor factors are supported")

    rows = string.ascii_lowercase[:n]
    cols = [rows[k] if k not in keep_set else string.ascii_uppercase[k] for k in range(n)]
    out = "".join(rows[k] for k in keep_set) + "".join(cols[k] for k in keep_set)
    spec = f"{rows}{''.join(cols)}->{out}"
    reduced = np.einsum(spec, m.reshape(dims + dims))
    kept_dim = int(np.prod([dims[k] for k in keep_set]))
    return reduced.reshape(kept_dim, kept_dim)


def hermiticity_deviation(m: Matrix) -> float:
    m = np.asarray(m)
    _require_square(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m: Matrix, tol: float = DEFAULT_TOL) -> bool:
    return hermiticity_deviation(m) <= tol


def eig_hermitian(m: Matrix, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, Matrix]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : Matrix
        Square matrix with ``max|m - m^dagger| <= tol``.
    tol : float
        Hermiticity tolerance; the Hermitian part ``(m + m^dagger)/2`` is
        what actually gets diagonalized.

    Returns
    -------
    eigenvalues : ndarray of float, ascending
    eigenvectors : Matrix
        Unitary matrix whose k-th column is the eigenvector for
        ``eigenvalues[k]``. Directions inside a degenerate cluster are
        arbitrary (but orthonormal).
    """
    a = as_matrix(m)
    n = _require_square(a)
    dev = hermiticity_deviation(a)
    if dev > tol:
        raise NotHermitianError(dev, tol)
    a = 0.5 * (a + dagger(a))
    v = np.eye(n, dtype=complex)
    threshold = JACOBI_THRESHOLD * max(1.0, float(np.linalg.norm(a)))

    # one extra sweep after the threshold is met: convergence is quadratic, so
    # it takes the residual from ~1e-12 down to roundoff at little cost
    polished = False
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= threshold:
            if polished or off == 0.0:
                break
            polished = True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # phase-fix column q so the pivot is real, then a real Givens rotation
                ph = np.conj(apq) / mag
                rot = np.array([[c, s], [-s * ph, c * ph]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = dagger(rot) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    else:
        raise QMeasError(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    evals = np.real(np.diag(a)).copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def min_eigenvalue(m: Matrix, tol: float = DEFAULT_TOL) -> float:
    return float(eig_hermitian(m, tol)[0][0])


def is_psd(m: Matrix, tol: float = DEFAULT_TOL) -> bool:
    """Hermitian within ``tol`` and no eigenvalue below ``-tol``."""
    if hermiticity_deviation(m) > tol:
        return False
    return min_eigenvalue(m, tol) >= -tol


def psd_sqrt(m: Matrix, tol: float = DEFAULT_TOL) -> Matrix:
    """Principal square root of a PSD matrix; small negative eigenvalues clamp to 0."""
    evals, vecs = eig_hermitian(m, tol)
    if evals[0] < -tol:
        raise QMeasError(f"matrix is not PSD: min eigenvalue {evals[0]:.3e}")
    root = np.sqrt(np.clip(evals, 0.0, None))
    return (vecs * root) @ dagger(vecs)


def spectral_projectors(m: Matrix, tol: float = DEFAULT_TOL, cluster_tol: float = 1e-8):
    """Group eigenvectors of a Hermitian matrix into (eigenvalue, projector) pairs."""
    evals, vecs = eig_hermitian(m, tol)
    groups: list[tuple[float, Matrix]] = []
    start = 0
    for k in range(1, len(evals) + 1):
        if k == len(evals) or evals[k] - evals[start] > cluster_tol:
            block = vecs[:, start:k]
            groups.append((float(np.mean(evals[start:k])), block @ dagger(block)))
            start = k
    return groups


def outer(ket: np.ndarray, bra: np.ndarray | None = None) -> Matrix:
    """``|ket><bra|``; with one argument, the projector ``|ket><ket|``."""
    ket = np.asarray(ket, dtype=complex).ravel()
    bra = ket if bra is None else np.asarray(bra, dtype=complex).ravel()
    return np.outer(ket, np.conj(bra))


def basis_ket(dim: int, index: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[index] = 1.0
    return e


def random_unitary(dim: int, rng: np.random.Generator) -> Matrix:
    """Haar-random unitary (QR of a complex Ginibre matrix with phase fix)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, rng: np.random.Generator) -> Matrix:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (z + dagger(z))


def random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> Matrix:
    """Random density matrix of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    z = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = z @ dagger(z)
    return rho / np.trace(rho).real


def random_povm(dim: int, outcomes: int, rng: np.random.Generator) -> list[Matrix]:
    """Random POVM ``S^{-1/2} A_i S^{-1/2}`` with ``A_i`` random PSD and ``S = sum A_i``.

    Each ``A_i`` has rank ``ceil(dim / outcomes)`` so that ``S`` is invertible.
    """
    if dim < 1 or outcomes < 1:
        raise QMeasError("dim and outcomes must be positive")
    rank = -(-dim // outcomes)
    parts = []
    for _ in range(outcomes):
        z = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
        parts.append(z @ dagger(z))
    w, v = eig_hermitian(sum(parts))
    s = v @ np.diag(w**-0.5) @ dagger(v)
    return [s @ p @ s for p in parts]
