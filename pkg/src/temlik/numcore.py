"""Finite-difference derivatives and small linear-algebra helpers.

Step sizes are fixed relative rules so that downstream golden values are
stable: sqrt(machine eps) for first derivatives, cbrt(machine eps) for
second derivatives.  Every failure carries the evaluation point, because the
optimiser uses these messages to diagnose where a trial step went bad.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DifferentiationError, SingularMatrixError

_EPS = np.finfo(float).eps
GRAD_STEP = np.sqrt(_EPS)
HESS_STEP = _EPS ** (1.0 / 3.0)


def as_finite_vector(x, name="vector"):
    """Return ``x`` as a 1-D float array, rejecting NaN/Inf entries."""
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries: {v}")
    return v


def as_finite_matrix(a, name="matrix"):
    """Return ``a`` as a 2-D float array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _probe(f, x):
    val = f(x)
    if not np.isfinite(val):
        raise DifferentiationError("non-finite function value", np.array(x))
    return val


def gradient(f, x, rel_step=GRAD_STEP):
    """Central-difference gradient of a scalar function.

    Steps are ``rel_step * (1 + |x_k|)`` per coordinate; the default
    ``rel_step`` is sqrt(machine eps).
    """
    x = as_finite_vector(x, "x")
    h = rel_step * (1.0 + np.abs(x))
    g = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h[k]
        g[k] = (_probe(f, x + e) - _probe(f, x - e)) / (2.0 * h[k])
    return g


def hessian(f, x, rel_step=HESS_STEP):
    """Symmetrised central-difference Hessian of a scalar function.

    The raw stencil is already symmetric up to roundoff; the final
    (H + H^T)/2 makes it exactly so.
    """
    x = as_finite_vector(x, "x")
    h = rel_step * (1.0 + np.abs(x))
    n = x.size
    H = np.empty((n, n))
    f0 = _probe(f, x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h[i]
        H[i, i] = (_probe(f, x + ei) - 2.0 * f0 + _probe(f, x - ei)) / h[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h[j]
            H[i, j] = H[j, i] = (
                _probe(f, x + ei + ej)
                - _probe(f, x + ei - ej)
                - _probe(f, x - ei + ej)
                + _probe(f, x - ei - ej)
            ) / (4.0 * h[i] * h[j])
    return (H + H.T) / 2.0


def jacobian(f, x, rel_step=GRAD_STEP):
    """Central-difference Jacobian of a vector-valued function.

    Returns the matrix with entry (i, k) = d f_i / d x_k.
    """
    x = as_finite_vector(x, "x")
    h = rel_step * (1.0 + np.abs(x))
    cols = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h[k]
        fp = np.atleast_1d(np.asarray(f(x + e), dtype=float))
        fm = np.atleast_1d(np.asarray(f(x - e), dtype=float))
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise DifferentiationError("non-finite function value", x + e)
        cols.append((fp - fm) / (2.0 * h[k]))
    return np.column_stack(cols)


def gram_det_sqrt(a):
    """|A^T A|^(1/2) for a full-column-rank matrix, via singular values.

    Uses a rank-revealing factorisation rather than determinant expansion, so
    it stays accurate for tall or ill-scaled matrices.
    """
    a = as_finite_matrix(a, "A")
    sv = np.linalg.svd(a, compute_uv=False)
    tol = max(a.shape) * _EPS * (sv[0] if sv.size else 0.0)
    rank = int(np.sum(sv > tol))
    if rank < a.shape[1]:
        raise SingularMatrixError(
            f"matrix is rank deficient: rank {rank} < {a.shape[1]} columns"
        )
    return float(np.prod(sv))


def is_positive_definite(a):
    """Cheap symmetric positive-definiteness check via Cholesky."""
    try:
        np.linalg.cholesky((a + a.T) / 2.0)
        return True
    except np.linalg.LinAlgError:
        return False
