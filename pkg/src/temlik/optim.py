"""Maximum-likelihood fitting: full, constrained, and profile sweeps.

Newton iteration with step halving is enough here: parameter dimensions are
small, Hessians are cheap (closed form or central differences), and the
observed information is needed at the optimum anyway.  Admissibility is
enforced by shrinking trial steps to stay strictly inside the model's open
box, never by penalising the objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numcore
from .exceptions import (
    ConvergenceError,
    NotPositiveDefiniteError,
    UnsupportedOperationError,
)
from .models import Model

MAX_ITER = 200
MAX_HALVINGS = 30
TOL = 1e-9


@dataclass(frozen=True)
class Fit:
    """Full maximum-likelihood fit."""

    theta_hat: np.ndarray
    loglik_max: float
    obs_info: np.ndarray        # negated Hessian at theta_hat
    converged: bool
    iterations: int


@dataclass(frozen=True)
class ConstrainedFit:
    """Maximum-likelihood fit with the interest parameter held fixed."""

    psi: float
    lambda_hat_psi: np.ndarray
    loglik: float               # profile log-likelihood at psi
    info_lambda_block: np.ndarray
    theta: np.ndarray           # assembled (psi, lambda_hat_psi) in model order
    iterations: int


def _scaled_le(value, ref, tol=TOL):
    return value <= tol * (1.0 + abs(ref))


def _shrink_into_box(theta, step, lo, hi):
    """Largest fraction of the Newton step keeping theta strictly interior."""
    alpha = 1.0
    for k in range(theta.size):
        if step[k] > 0 and np.isfinite(hi[k]):
            room = hi[k] - theta[k]
            alpha = min(alpha, 0.99 * room / step[k])
        elif step[k] < 0 and np.isfinite(lo[k]):
            room = theta[k] - lo[k]
            alpha = min(alpha, 0.99 * room / (-step[k]))
    return max(alpha, 0.0)


def _newton_max(f, grad, hess, x0, lo, hi, what):
    """Maximise f by damped Newton inside an open box."""
    x = np.asarray(x0, float).copy()
    fx = f(x)
    if not np.isfinite(fx):
        raise ConvergenceError(f"{what}: non-finite objective at start", x)
    for it in range(1, MAX_ITER + 1):
        g = grad(x)
        H = hess(x)
        try:
            step = np.linalg.solve(-H, g)
        except np.linalg.LinAlgError:
            step = g.copy()
        if not np.all(np.isfinite(step)) or float(g @ step) <= 0.0:
            # Hessian unusable or not an ascent direction: steepest ascent,
            # scaled to a sane length.
            gn = np.linalg.norm(g)
            step = g / gn * min(1.0, gn) if gn > 0 else g

        alpha = _shrink_into_box(x, step, lo, hi)
        if alpha <= 0.0:
            raise ConvergenceError(f"{what}: trial step pinned to the boundary", x)
        accepted = False
        for _ in range(MAX_HALVINGS + 1):
            x_new = x + alpha * step
            f_new = f(x_new)
            if np.isfinite(f_new) and f_new >= fx - 1e-14 * (1.0 + abs(fx)):
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            raise ConvergenceError(f"{what}: line search failed", x)

        moved = np.linalg.norm(x_new - x)
        x, fx = x_new, f_new
        gnorm = np.linalg.norm(grad(x))
        if _scaled_le(moved, np.linalg.norm(x)) and _scaled_le(gnorm, fx):
            return x, fx, it
    raise ConvergenceError(f"{what}: no convergence after {MAX_ITER} iterations", x)


def _loglik_parts(model: Model):
    y = model.data
    f = lambda th: model.loglik(th, y)
    if model.score is not None:
        grad = lambda th: np.atleast_1d(model.score(th, y))
    else:
        grad = lambda th: numcore.gradient(f, th)
    if model.hess is not None:
        hess = lambda th: np.atleast_2d(model.hess(th, y))
    else:
        hess = lambda th: numcore.hessian(f, th)
    return f, grad, hess


def fit_mle(model: Model, start=None) -> Fit:
    """Fit the full model by Newton iteration with step halving.

    The observed information is the negated (closed-form or
    central-difference) Hessian at the optimum and must be positive
    definite; a failure here means the optimiser stopped on a boundary or
    saddle rather than an interior maximum.
    """
    f, grad, hess = _loglik_parts(model)
    x0 = numcore.as_finite_vector(
        model.start(model.data) if start is None else start, "start")
    model.require_in_domain(x0)
    theta, fmax, it = _newton_max(f, grad, hess, x0, model.lo, model.hi,
                                  f"fit_mle[{model.id}]")
    info = -hess(theta)
    info = (info + info.T) / 2.0
    if not numcore.is_positive_definite(info):
        raise NotPositiveDefiniteError(
            f"fit_mle[{model.id}]: observed information not positive definite "
            f"at {theta}; boundary or saddle point")
    return Fit(theta_hat=theta, loglik_max=fmax, obs_info=info,
               converged=True, iterations=it)


def fit_constrained(model: Model, psi: float, start=None) -> ConstrainedFit:
    """Maximise over the nuisance parameters with the interest value fixed."""
    if model.p < 2:
        raise UnsupportedOperationError(
            "fit_constrained requires at least two parameters")
    i = model.interest_index
    free = model.nuisance_indices()
    lo_i, hi_i = model.lo[i], model.hi[i]
    if not (lo_i < psi < hi_i):
        raise ConvergenceError(
            f"fit_constrained[{model.id}]: psi={psi} outside the open domain")

    def assemble(lam):
        th = np.empty(model.p)
        th[i] = psi
        th[free] = lam
        return th

    f, grad, hess = _loglik_parts(model)
    fl = lambda lam: f(assemble(lam))
    gl = lambda lam: grad(assemble(lam))[free]
    hl = lambda lam: hess(assemble(lam))[np.ix_(free, free)]

    if start is None:
        lam0 = model.start(model.data)[free]
    else:
        start = np.asarray(start, float)
        lam0 = start[free] if start.size == model.p else start
    lam, fmax, it = _newton_max(fl, gl, hl, lam0,
                                model.lo[free], model.hi[free],
                                f"fit_constrained[{model.id}, psi={psi:.6g}]")
    block = -hl(lam)
    block = (block + block.T) / 2.0
    if not numcore.is_positive_definite(block):
        raise NotPositiveDefiniteError(
            f"fit_constrained[{model.id}]: nuisance information not positive "
            f"definite at psi={psi}")
    return ConstrainedFit(psi=float(psi), lambda_hat_psi=lam, loglik=fmax,
                          info_lambda_block=block, theta=assemble(lam),
                          iterations=it)


def profile_curve(model: Model, psi_grid, fit: Fit | None = None) -> list[ConstrainedFit]:
    """Constrained fits along a strictly increasing interest-parameter grid.

    The sweep starts at the grid point nearest the full MLE and walks
    outward in both directions, warm starting each fit from its neighbour's
    nuisance estimate.  That keeps the result deterministic and cheap, and
    is also why callers wanting parallelism should parallelise elsewhere.
    """
    if model.p < 2:
        raise UnsupportedOperationError("profile_curve requires at least two parameters")
    grid = numcore.as_finite_vector(psi_grid, "psi_grid")
    if grid.size < 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("psi_grid must be non-empty and strictly increasing")
    if fit is None:
        fit = fit_mle(model)
    psi_hat = model.interest(fit.theta_hat)

    out: dict[int, ConstrainedFit] = {}
    anchor = int(np.argmin(np.abs(grid - psi_hat)))
    order = list(range(anchor, grid.size)) + list(range(anchor - 1, -1, -1))
    for idx in order:
        if idx == anchor or idx == anchor - 1:
            warm = fit.theta_hat
        else:
            prev = out[idx - 1 if idx > anchor else idx + 1]
            warm = prev.theta
        try:
            cf = fit_constrained(model, grid[idx], start=warm)
        except Exception as exc:
            raise ConvergenceError(
                f"profile_curve[{model.id}]: failure at grid point "
                f"psi={grid[idx]:.6g}: {exc}") from exc
        if cf.loglik > fit.loglik_max + 1e-8 * (1.0 + abs(fit.loglik_max)):
            raise ConvergenceError(
                f"profile_curve[{model.id}]: profile value exceeds the full "
                f"maximum at psi={grid[idx]:.6g}")
        out[idx] = cf
    return [out[k] for k in range(grid.size)]
