"""Dense Hermitian positive-definite kernels used throughout the package.

Every covariance-like matrix formed here (marginal covariances, Gram
matrices, information matrices) is HPD by construction, so a Cholesky
factorization backs both the solver and the log-determinant.
"""

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DimensionMismatch, NotHermitian, NotPositiveDefinite

# Relative Hermitian-symmetry tolerance. Inputs are formed symmetrically,
# so a violation indicates an upstream bug rather than roundoff.
HERMITIAN_RTOL = 1e-10


def _check_hpd_input(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotHermitian("matrix contains non-finite entries")
    scale = np.linalg.norm(a)
    asym = np.linalg.norm(a - a.conj().T)
    if asym > HERMITIAN_RTOL * max(scale, 1.0):
        raise NotHermitian(f"relative asymmetry {asym / max(scale, 1.0):.3e} exceeds {HERMITIAN_RTOL:.0e}")
    return a


def cholesky_hpd(a: np.ndarray):
    """Cholesky factor of a Hermitian positive-definite matrix.

    Returns the (factor, lower) pair used by ``scipy.linalg.cho_solve``.
    Raises ``NotHermitian`` / ``NotPositiveDefinite`` on invalid input.
    """
    a = _check_hpd_input(a)
    try:
        return cho_factor(a, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def solve_hpd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a @ x = b`` for Hermitian positive-definite ``a``.

    ``b`` may be a vector or a matrix of stacked right-hand sides; ``a``
    is left unmodified.
    """
    b = np.asarray(b, dtype=np.complex128)
    if b.shape[0] != np.asarray(a).shape[0]:
        raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix has {np.asarray(a).shape[0]}")
    return cho_solve(cholesky_hpd(a), b)


def log_det_hpd(a: np.ndarray) -> float:
    """ln det(a) via the Cholesky factor (never the naive determinant)."""
    factor, _ = cholesky_hpd(a)
    return float(2.0 * np.sum(np.log(np.diag(factor).real)))
