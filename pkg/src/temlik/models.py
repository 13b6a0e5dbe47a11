"""Built-in model catalog.

Every model carries closed-form likelihood pieces (score, Hessian, sample
space derivative, sufficient directions, canonical parameter) next to the
generic numeric machinery, so the closed forms double as differentiation
oracles in the test suite.

A model is a frozen bundle of data plus callables; all parameter-dependent
quantities take the parameter vector explicitly, and observed data enters
through ``model.data`` (or the ``y`` argument where repeated-sampling code
needs to evaluate at simulated responses).  Parameter domains are open boxes;
models whose natural domain is not a box are reparametrised by the builder.

The ``theta`` layout always puts the interest parameter at
``interest_index`` (0 unless stated otherwise).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .exceptions import DomainError, UnsupportedModelError

Array = np.ndarray

CONTINUOUS = "pivot"          # per-observation pivot / structural equation
DISCRETE = "discrete-score"   # expected-information direction construction


@dataclass(frozen=True)
class Reparam:
    """A smooth bijection of a scalar parameter, used for invariance tests."""

    name: str
    fwd: Callable[[float], float]   # theta -> eta
    inv: Callable[[float], float]   # eta -> theta


@dataclass(frozen=True)
class Model:
    id: str
    p: int
    data: Array
    hyper: dict
    loglik: Callable[[Array, Array], float]
    quantile_structure: str = CONTINUOUS
    block_size: int = 1
    interest_index: int = 0
    lo: Array = None                      # open-box lower bounds, length p
    hi: Array = None                      # open-box upper bounds, length p
    start: Callable[[Array], Array] = None
    score: Optional[Callable[[Array, Array], Array]] = None
    hess: Optional[Callable[[Array, Array], Array]] = None
    dloglik_dy: Optional[Callable[[Array, Array], Array]] = None
    pivot: Optional[Callable[[Array, Array, int], Array]] = None
    directions_closed: Optional[Callable[[Array, Array], Array]] = None
    phi_closed: Optional[Callable[[Array, Array], Array]] = None
    dphi_closed: Optional[Callable[[Array, Array], Array]] = None
    simulate: Optional[Callable[[Array, np.random.Generator], Array]] = None
    reparam: Optional[Reparam] = None
    accuracy_order: int = 3
    # discrete-response pieces (canonical-link GLMs)
    design: Optional[Array] = None
    var_fn: Optional[Callable[[Array], Array]] = None
    eta_fn: Optional[Callable[[Array], Array]] = None
    dloglik_dw: Optional[Callable[[Array], Array]] = None

    @property
    def n(self) -> int:
        return self.data.size

    @property
    def n_blocks(self) -> int:
        return self.data.size // self.block_size

    def in_domain(self, theta) -> bool:
        theta = np.atleast_1d(np.asarray(theta, float))
        return bool(np.all(theta > self.lo) and np.all(theta < self.hi))

    def require_in_domain(self, theta):
        if not self.in_domain(theta):
            raise DomainError(
                f"parameter {np.atleast_1d(theta)} outside the open domain of "
                f"model '{self.id}'"
            )

    def interest(self, theta) -> float:
        return float(np.atleast_1d(theta)[self.interest_index])

    def nuisance_indices(self) -> Array:
        return np.array([k for k in range(self.p) if k != self.interest_index])

    def with_data(self, y) -> "Model":
        """Rebuild the same model around a new response vector."""
        hyper = {k: v for k, v in self.hyper.items() if k != "data"}
        hyper["data"] = np.asarray(y, float).tolist()
        return catalog(self.id, hyper)

    def loglik_at(self, theta) -> float:
        return self.loglik(np.atleast_1d(np.asarray(theta, float)), self.data)


def _finite_box(p, lo=-np.inf, hi=np.inf):
    return np.full(p, lo, float), np.full(p, hi, float)


# ---------------------------------------------------------------------------
# gamma ratio: y1/theta and y2*theta are unit-scale gamma variables; the
# conditional model given the ancillary a = sqrt(y1*y2) has kernel
# l(theta) = -a(s/theta + theta/s) with s = sqrt(y1/y2), maximised at s.
# ---------------------------------------------------------------------------

def _gamma_ratio(hyper):
    shape = float(hyper.get("shape", 1.0))
    if shape <= 0:
        raise DomainError("gamma_ratio: shape must be positive")
    if "data" in hyper:
        y = np.asarray(hyper["data"], float)
        if y.shape != (2,) or np.any(y <= 0):
            raise DomainError("gamma_ratio: data must be two positive values")
        s_obs = float(np.sqrt(y[0] / y[1]))
        a_obs = float(np.sqrt(y[0] * y[1]))
    else:
        s_obs = float(hyper["s"])
        a_obs = float(hyper["a"])
        if s_obs <= 0 or a_obs <= 0:
            raise DomainError("gamma_ratio: s and a must be positive")
        y = np.array([a_obs * s_obs, a_obs / s_obs])

    def loglik(theta, yy):
        th = theta[0]
        return -yy[0] / th - yy[1] * th

    def score(theta, yy):
        th = theta[0]
        return np.array([yy[0] / th ** 2 - yy[1]])

    def hess(theta, yy):
        th = theta[0]
        return np.array([[-2.0 * yy[0] / th ** 3]])

    def dloglik_dy(theta, yy):
        th = theta[0]
        return np.array([-1.0 / th, -th])

    def pivot(theta, yblock, j):
        # y1/theta and y2*theta are parameter-free gamma variables
        th = theta[0]
        return yblock / th if j == 0 else yblock * th

    def directions_closed(theta_hat, yy):
        th = theta_hat[0]
        return np.array([[yy[0] / th], [-yy[1] / th]])

    def phi_closed(theta, yy):
        th = theta[0]
        s = np.sqrt(yy[0] / yy[1])
        a = np.sqrt(yy[0] * yy[1])
        return np.array([-a * (1.0 / th - th / s ** 2)])

    def dphi_closed(theta, yy):
        th = theta[0]
        s = np.sqrt(yy[0] / yy[1])
        a = np.sqrt(yy[0] * yy[1])
        return np.array([[a * (1.0 / th ** 2 + 1.0 / s ** 2)]])

    def simulate(theta, rng):
        g = rng.gamma(shape, 1.0, size=2)
        return np.array([theta[0] * g[0], g[1] / theta[0]])

    lo, hi = _finite_box(1, lo=0.0)
    return Model(
        id="gamma_ratio", p=1, data=y,
        hyper={"s": s_obs, "a": a_obs, "shape": shape},
        loglik=loglik, score=score, hess=hess, dloglik_dy=dloglik_dy,
        pivot=pivot, directions_closed=directions_closed,
        phi_closed=phi_closed, dphi_closed=dphi_closed,
        lo=lo, hi=hi,
        start=lambda yy: np.array([np.sqrt(yy[0] / yy[1])]),
        simulate=simulate,
        reparam=Reparam("log", np.log, np.exp),
    )


# ---------------------------------------------------------------------------
# exponential pair: y1 ~ Exp(rate lambda*psi), y2 ~ Exp(rate lambda);
# interest is the rate ratio psi.  This is a linear exponential family with
# canonical parameter -(lambda*psi, lambda) and canonical statistic y.
# ---------------------------------------------------------------------------

def _exp_pair(hyper):
    y = np.asarray(hyper["data"], float)
    if y.shape != (2,) or np.any(y <= 0):
        raise DomainError("exp_pair: data must be two positive values")

    def loglik(theta, yy):
        psi, lam = theta
        return 2.0 * np.log(lam) + np.log(psi) - lam * (psi * yy[0] + yy[1])

    def score(theta, yy):
        psi, lam = theta
        return np.array([1.0 / psi - lam * yy[0],
                         2.0 / lam - (psi * yy[0] + yy[1])])

    def hess(theta, yy):
        psi, lam = theta
        return np.array([[-1.0 / psi ** 2, -yy[0]],
                         [-yy[0], -2.0 / lam ** 2]])

    def dloglik_dy(theta, yy):
        psi, lam = theta
        return np.array([-lam * psi, -lam])

    def pivot(theta, yblock, j):
        psi, lam = theta
        rate = lam * psi if j == 0 else lam
        return yblock * rate

    def phi_closed(theta, yy):
        psi, lam = theta
        return np.array([-lam * psi, -lam])

    def dphi_closed(theta, yy):
        psi, lam = theta
        return np.array([[-lam, -psi], [0.0, -1.0]])

    def simulate(theta, rng):
        psi, lam = theta
        e = rng.exponential(size=2)
        return np.array([e[0] / (lam * psi), e[1] / lam])

    lo, hi = _finite_box(2, lo=0.0)
    return Model(
        id="exp_pair", p=2, data=y, hyper={"data": y.tolist()},
        loglik=loglik, score=score, hess=hess, dloglik_dy=dloglik_dy,
        pivot=pivot,
        directions_closed=lambda theta_hat, yy: np.eye(2),
        phi_closed=phi_closed, dphi_closed=dphi_closed,
        lo=lo, hi=hi,
        start=lambda yy: np.array([yy[1] / yy[0], 1.0 / yy[1]]),
        simulate=simulate,
    )


# ---------------------------------------------------------------------------
# bivariate normal correlation: n independent pairs with zero means, unit
# variances, covariance theta.  Sufficient pair (s, t) = (sum y1*y2,
# sum(y1^2+y2^2)/2).  V rows come from the chi-squared pivots
# z1 = (y1+y2)^2/{2(1+theta)}, z2 = (y1-y2)^2/{2(1-theta)}.
# ---------------------------------------------------------------------------

def _bvn_stats(y):
    pairs = y.reshape(-1, 2)
    s = float(np.sum(pairs[:, 0] * pairs[:, 1]))
    t = float(np.sum(pairs ** 2) / 2.0)
    return pairs, s, t


def _bvn_mle(s, t, npairs):
    # score numerator is the cubic  -n th^3 + s th^2 + (n - 2t) th + s
    roots = np.roots([-npairs, s, npairs - 2.0 * t, s])
    cand = [float(r.real) for r in roots
            if abs(r.imag) < 1e-10 and -1.0 < r.real < 1.0]
    if not cand:
        raise DomainError("bvn_corr: no admissible stationary point")
    ll = lambda th: (-npairs / 2.0 * np.log1p(-th ** 2)
                     - (t - th * s) / (1.0 - th ** 2))
    return max(cand, key=ll)


def _bvn_corr(hyper):
    y = np.asarray(hyper["data"], float).ravel()
    if y.size < 2 or y.size % 2:
        raise DomainError("bvn_corr: data must hold an even number of values "
                          "(flattened pairs)")
    npairs = y.size // 2

    def loglik(theta, yy):
        th = theta[0]
        _, s, t = _bvn_stats(yy)
        return -0.5 * (yy.size // 2) * np.log1p(-th ** 2) - (t - th * s) / (1.0 - th ** 2)

    def score(theta, yy):
        th = theta[0]
        _, s, t = _bvn_stats(yy)
        m = yy.size // 2
        b = 1.0 - th ** 2
        return np.array([(m * th * b + s * (1.0 + th ** 2) - 2.0 * th * t) / b ** 2])

    def hess(theta, yy):
        th = theta[0]
        _, s, t = _bvn_stats(yy)
        m = yy.size // 2
        b = 1.0 - th ** 2
        c = s * (1.0 + th ** 2) - 2.0 * th * t
        val = (m / b + 2.0 * m * th ** 2 / b ** 2
               + (2.0 * s * th - 2.0 * t) / b ** 2 + 4.0 * th * c / b ** 3)
        return np.array([[val]])

    def dloglik_dy(theta, yy):
        th = theta[0]
        pairs = yy.reshape(-1, 2)
        out = np.empty_like(yy)
        out[0::2] = -(pairs[:, 0] - th * pairs[:, 1]) / (1.0 - th ** 2)
        out[1::2] = -(pairs[:, 1] - th * pairs[:, 0]) / (1.0 - th ** 2)
        return out

    def pivot(theta, yblock, j):
        th = theta[0]
        return np.array([
            (yblock[0] + yblock[1]) ** 2 / (2.0 * (1.0 + th)),
            (yblock[0] - yblock[1]) ** 2 / (2.0 * (1.0 - th)),
        ])

    def directions_closed(theta_hat, yy):
        th = theta_hat[0]
        pairs = yy.reshape(-1, 2)
        v = np.empty(yy.size)
        denom = 2.0 * (1.0 - th ** 2)
        v[0::2] = (pairs[:, 1] - th * pairs[:, 0]) / denom
        v[1::2] = (pairs[:, 0] - th * pairs[:, 1]) / denom
        return v[:, None]

    def phi_closed(theta, yy):
        th = theta[0]
        _, s, t = _bvn_stats(yy)
        th_hat = _bvn_mle(s, t, yy.size // 2)
        num = th * (t - th_hat * s) - (s - th_hat * t)
        return np.array([num / ((1.0 - th ** 2) * (1.0 - th_hat ** 2))])

    def simulate(theta, rng):
        th = theta[0]
        z = rng.standard_normal((npairs, 2))
        out = np.empty(2 * npairs)
        out[0::2] = z[:, 0]
        out[1::2] = th * z[:, 0] + np.sqrt(1.0 - th ** 2) * z[:, 1]
        return out

    def start(yy):
        _, s, t = _bvn_stats(yy)
        return np.array([s / t])   # |s| < t always, so strictly admissible

    return Model(
        id="bvn_corr", p=1, data=y, hyper={"data": y.tolist()},
        loglik=loglik, score=score, hess=hess, dloglik_dy=dloglik_dy,
        pivot=pivot, directions_closed=directions_closed,
        phi_closed=phi_closed,
        block_size=2,
        lo=np.array([-1.0]), hi=np.array([1.0]),
        start=start, simulate=simulate,
    )


# ---------------------------------------------------------------------------
# regression-scale: y = X beta + sigma*eps with standard normal errors and
# theta = (beta, sigma); the structural equation gives V = (X, residuals).
# ---------------------------------------------------------------------------

def _regression_scale(hyper):
    X = np.asarray(hyper["X"], float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(hyper["data"], float)
    n, k = X.shape
    if y.shape != (n,):
        raise DomainError("regression_scale: response length must match X")
    if n <= k:
        raise DomainError("regression_scale: need more observations than "
                          "coefficients")
    p = k + 1
    interest = hyper.get("interest", 0)
    if interest == "sigma":
        interest = k
    interest = int(interest)
    if not 0 <= interest < p:
        raise DomainError("regression_scale: interest index out of range")

    def split(theta):
        return theta[:k], theta[k]

    def loglik(theta, yy):
        beta, sigma = split(theta)
        r = yy - X @ beta
        return -n * np.log(sigma) - 0.5 * float(r @ r) / sigma ** 2

    def score(theta, yy):
        beta, sigma = split(theta)
        r = yy - X @ beta
        return np.concatenate([X.T @ r / sigma ** 2,
                               [-n / sigma + float(r @ r) / sigma ** 3]])

    def hess(theta, yy):
        beta, sigma = split(theta)
        r = yy - X @ beta
        h = np.empty((p, p))
        h[:k, :k] = -X.T @ X / sigma ** 2
        h[:k, k] = h[k, :k] = -2.0 * X.T @ r / sigma ** 3
        h[k, k] = n / sigma ** 2 - 3.0 * float(r @ r) / sigma ** 4
        return h

    def dloglik_dy(theta, yy):
        beta, sigma = split(theta)
        return -(yy - X @ beta) / sigma ** 2

    def pivot(theta, yblock, j):
        beta, sigma = split(theta)
        return (yblock - X[j] @ beta) / sigma

    def mle(yy):
        beta = np.linalg.lstsq(X, yy, rcond=None)[0]
        r = yy - X @ beta
        sigma = np.sqrt(float(r @ r) / n)
        return beta, sigma

    def directions_closed(theta_hat, yy):
        beta, sigma = split(theta_hat)
        return np.column_stack([X, (yy - X @ beta) / sigma])

    def phi_closed(theta, yy):
        beta_hat, sigma_hat = mle(yy)
        v = np.column_stack([X, (yy - X @ beta_hat) / sigma_hat])
        return v.T @ dloglik_dy(theta, yy)

    def simulate(theta, rng):
        beta, sigma = split(theta)
        return X @ beta + sigma * rng.standard_normal(n)

    def start(yy):
        beta, sigma = mle(yy)
        return np.concatenate([beta, [sigma]])

    lo, hi = _finite_box(p)
    lo[k] = 0.0
    return Model(
        id="regression_scale", p=p, data=y,
        hyper={"X": X.tolist(), "data": y.tolist(), "interest": interest},
        loglik=loglik, score=score, hess=hess, dloglik_dy=dloglik_dy,
        pivot=pivot, directions_closed=directions_closed,
        phi_closed=phi_closed,
        interest_index=interest, lo=lo, hi=hi,
        start=start,
        simulate=simulate,
        design=X,
    )


# ---------------------------------------------------------------------------
# exponential mean: y_j ~ Exp(mean theta); the canonical exact-pivot example.
# ---------------------------------------------------------------------------

def _exp_mean(hyper):
    y = np.asarray(hyper["data"], float)
    if y.ndim != 1 or y.size == 0 or np.any(y <= 0):
        raise DomainError("exp_mean: data must be a non-empty positive vector")
    n = y.size

    def loglik(theta, yy):
        th = theta[0]
        return -yy.size * np.log(th) - np.sum(yy) / th

    def score(theta, yy):
        th = theta[0]
        return np.array([-yy.size / th + np.sum(yy) / th ** 2])

    def hess(theta, yy):
        th = theta[0]
        return np.array([[yy.size / th ** 2 - 2.0 * np.sum(yy) / th ** 3]])

    def dloglik_dy(theta, yy):
        return np.full(yy.size, -1.0 / theta[0])

    def pivot(theta, yblock, j):
        return yblock / theta[0]

    def directions_closed(theta_hat, yy):
        return (yy / theta_hat[0])[:, None]

    def phi_closed(theta, yy):
        # V^T dl/dy = -(sum y / ybar)/theta = -n/theta at theta_hat = ybar
        return np.array([-(np.sum(yy) / np.mean(yy)) / theta[0]])

    def dphi_closed(theta, yy):
        return np.array([[(np.sum(yy) / np.mean(yy)) / theta[0] ** 2]])

    lo, hi = _finite_box(1, lo=0.0)
    return Model(
        id="exp_mean", p=1, data=y, hyper={"data": y.tolist()},
        loglik=loglik, score=score, hess=hess, dloglik_dy=dloglik_dy,
        pivot=pivot, directions_closed=directions_closed,
        phi_closed=phi_closed, dphi_closed=dphi_closed,
        lo=lo, hi=hi,
        start=lambda yy: np.array([np.mean(yy)]),
        simulate=lambda theta, rng: rng.exponential(scale=theta[0], size=n),
        reparam=Reparam("log", np.log, np.exp),
    )


# ---------------------------------------------------------------------------
# two-parameter linear exponential family: normal responses written in
# canonical coordinates theta = (psi, lambda) = (mu/sigma^2, -1/(2 sigma^2)),
# so phi(theta) = theta exactly and the general q must collapse to the
# linear-family form.
# ---------------------------------------------------------------------------

def _linexp_2par(hyper):
    y = np.asarray(hyper["data"], float)
    if y.ndim != 1 or y.size < 3:
        raise DomainError("linexp_2par: need at least three observations")
    n = y.size

    def kappa(psi, lam):
        return -psi ** 2 / (4.0 * lam) - 0.5 * np.log(-2.0 * lam)

    def loglik(theta, yy):
        psi, lam = theta
        return psi * np.sum(yy) + lam * np.sum(yy ** 2) - yy.size * kappa(psi, lam)

    def score(theta, yy):
        psi, lam = theta
        m = yy.size
        return np.array([
            np.sum(yy) + m * psi / (2.0 * lam),
            np.sum(yy ** 2) - m * (psi ** 2 / (4.0 * lam ** 2) - 1.0 / (2.0 * lam)),
        ])

    def hess(theta, yy):
        psi, lam = theta
        m = yy.size
        return -m * np.array([
            [-1.0 / (2.0 * lam), psi / (2.0 * lam ** 2)],
            [psi / (2.0 * lam ** 2), -psi ** 2 / (2.0 * lam ** 3) + 1.0 / (2.0 * lam ** 2)],
        ])

    def dloglik_dy(theta, yy):
        psi, lam = theta
        return psi + 2.0 * lam * yy

    def moments(theta):
        psi, lam = theta
        mu = -psi / (2.0 * lam)
        sigma = (-2.0 * lam) ** -0.5
        return mu, sigma

    def pivot(theta, yblock, j):
        mu, sigma = moments(theta)
        return (yblock - mu) / sigma

    def directions_closed(theta_hat, yy):
        psi, lam = theta_hat
        mu, sigma = moments(theta_hat)
        eps = (yy - mu) / sigma
        dy_dpsi = np.full(yy.size, -1.0 / (2.0 * lam))
        dy_dlam = psi / (2.0 * lam ** 2) + eps * sigma ** 3
        return np.column_stack([dy_dpsi, dy_dlam])

    def start(yy):
        mu = np.mean(yy)
        var = np.mean(yy ** 2) - mu ** 2
        return np.array([mu / var, -0.5 / var])

    def simulate(theta, rng):
        mu, sigma = moments(theta)
        return mu + sigma * rng.standard_normal(n)

    lo, hi = _finite_box(2)
    hi[1] = 0.0
    return Model(
        id="linexp_2par", p=2, data=y, hyper={"data": y.tolist()},
        loglik=loglik, score=score, hess=hess, dloglik_dy=dloglik_dy,
        pivot=pivot, directions_closed=directions_closed,
        phi_closed=lambda theta, yy: np.array(theta, float),
        dphi_closed=lambda theta, yy: np.eye(2),
        lo=lo, hi=hi, start=start, simulate=simulate,
    )


# ---------------------------------------------------------------------------
# canonical-link GLMs (discrete responses).  The sufficient-direction blocks
# are per-observation expected-information contributions x_j x_j^T v_j, and
# the resulting canonical parameter is the fixed linear map
# phi(theta) = X^T diag(v_hat) X theta.
# ---------------------------------------------------------------------------

def _glm_common(model_id, X, y, loglik, score, hess, var_fn, simulate,
                extra_hyper):
    p = X.shape[1]
    interest = int(extra_hyper.get("interest", 0))
    if not 0 <= interest < p:
        raise DomainError(f"{model_id}: interest index out of range")

    lo, hi = _finite_box(p)
    return Model(
        id=model_id, p=p, data=y,
        hyper={"X": X.tolist(), "data": y.tolist(), **extra_hyper},
        loglik=loglik, score=score, hess=hess,
        quantile_structure=DISCRETE, accuracy_order=2,
        interest_index=interest,
        lo=lo, hi=hi,
        start=lambda yy: np.zeros(p),
        simulate=simulate,
        design=X,
        eta_fn=lambda theta: X @ theta,
        var_fn=var_fn,
    )


def _poisson_glm(hyper):
    X = np.asarray(hyper["X"], float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(hyper["data"], float)
    if y.shape != (X.shape[0],) or np.any(y < 0):
        raise DomainError("poisson_glm: counts must be non-negative and "
                          "match the design")

    def loglik(theta, yy):
        eta = X @ theta
        return float(yy @ eta - np.sum(np.exp(eta)))

    def score(theta, yy):
        return X.T @ (yy - np.exp(X @ theta))

    def hess(theta, yy):
        w = np.exp(X @ theta)
        return -(X.T * w) @ X

    def simulate(theta, rng):
        return rng.poisson(np.exp(X @ theta)).astype(float)

    return _glm_common("poisson_glm", X, y, loglik, score, hess,
                       lambda theta: np.exp(X @ theta), simulate,
                       {k: hyper[k] for k in ("interest",) if k in hyper})


def _binomial_glm(hyper):
    X = np.asarray(hyper["X"], float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(hyper["data"], float)
    m = np.asarray(hyper.get("m", 1.0), float)
    m = np.broadcast_to(m, y.shape).astype(float)
    if y.shape != (X.shape[0],) or np.any(y < 0) or np.any(y > m):
        raise DomainError("binomial_glm: need 0 <= successes <= trials, "
                          "matching the design")

    def probs(theta):
        eta = X @ theta
        return 1.0 / (1.0 + np.exp(-eta))

    def loglik(theta, yy):
        eta = X @ theta
        return float(yy @ eta - m @ np.logaddexp(0.0, eta))

    def score(theta, yy):
        return X.T @ (yy - m * probs(theta))

    def hess(theta, yy):
        pr = probs(theta)
        w = m * pr * (1.0 - pr)
        return -(X.T * w) @ X

    def simulate(theta, rng):
        return rng.binomial(m.astype(int), probs(theta)).astype(float)

    return _glm_common("binomial_glm", X, y, loglik, score, hess,
                       lambda theta: m * probs(theta) * (1.0 - probs(theta)),
                       simulate,
                       {"m": m.tolist(),
                        **{k: hyper[k] for k in ("interest",) if k in hyper}})


_BUILDERS = {
    "gamma_ratio": _gamma_ratio,
    "exp_pair": _exp_pair,
    "bvn_corr": _bvn_corr,
    "regression_scale": _regression_scale,
    "exp_mean": _exp_mean,
    "linexp_2par": _linexp_2par,
    "poisson_glm": _poisson_glm,
    "binomial_glm": _binomial_glm,
}

CATALOG_IDS = tuple(sorted(_BUILDERS))


def catalog(model_id: str, hyper: dict | None = None, **kw) -> Model:
    """Build a catalog model.

    ``hyper`` holds hyperparameters and, for data-carrying models, the
    response vector under the key ``"data"``.  Keyword arguments are merged
    into ``hyper`` for convenience: ``catalog("gamma_ratio", s=1.6, a=3)``.
    """
    if model_id not in _BUILDERS:
        raise KeyError(
            f"unknown model id '{model_id}'; available: {', '.join(CATALOG_IDS)}"
        )
    merged = dict(hyper or {})
    merged.update(kw)
    return _BUILDERS[model_id](merged)


def reparametrised(model: Model) -> Model:
    """Rewrite a one-parameter model in its declared alternative coordinates.

    Only the pieces needed to recompute a significance curve are wrapped:
    log-likelihood (numeric derivatives take over), pivots, sample-space
    derivative and simulation.  Used by the invariance tests.
    """
    if model.reparam is None:
        raise UnsupportedModelError(f"model '{model.id}' declares no reparametrisation")
    if model.p != 1:
        raise UnsupportedModelError("reparametrisation support is limited to p=1")
    rp = model.reparam
    back = lambda eta: np.array([rp.inv(eta[0])])

    lo = rp.fwd(model.lo[0]) if np.isfinite(model.lo[0]) and model.lo[0] > 0 else -np.inf
    with np.errstate(over="ignore"):
        hi = rp.fwd(model.hi[0]) if np.isfinite(model.hi[0]) else np.inf

    wrapped = {
        "loglik": lambda eta, yy: model.loglik(back(eta), yy),
        "score": None, "hess": None, "dphi_closed": None, "phi_closed": None,
        "dloglik_dy": (lambda eta, yy: model.dloglik_dy(back(eta), yy))
                      if model.dloglik_dy else None,
        "pivot": (lambda eta, yb, j: model.pivot(back(eta), yb, j))
                 if model.pivot else None,
        "directions_closed": (lambda eta_hat, yy:
                              model.directions_closed(back(eta_hat), yy))
                             if model.directions_closed else None,
        "simulate": (lambda eta, rng: model.simulate(back(eta), rng))
                    if model.simulate else None,
        "start": lambda yy: np.array([rp.fwd(model.start(yy)[0])]),
        "lo": np.array([lo]), "hi": np.array([hi]),
        "id": f"{model.id}[{rp.name}]",
        "reparam": None,
    }
    return replace(model, **wrapped)


# ---------------------------------------------------------------------------
# loading models and data from files
# ---------------------------------------------------------------------------

def load_data_file(path) -> list:
    """Read a response vector from a JSON array or a column CSV.

    Multi-column CSV rows are flattened row-major, which matches the
    interleaved layout used by vector-observation models.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"data file not found: {path}")
    if path.suffix.lower() == ".json":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, list):
            raise ValueError(f"data JSON must be an array: {path}")
        return [float(v) for v in np.asarray(data, float).ravel()]
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.extend(float(v) for v in row if v.strip() != "")
            except ValueError as exc:
                raise ValueError(f"malformed CSV value in {path}: {exc}") from None
    if not rows:
        raise ValueError(f"no numeric data found in {path}")
    return rows


def load_model_file(path) -> Model:
    """Build a model from a JSON document {"id": ..., "hyper": {...}, "data": [...]}."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"model file not found: {path}")
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed model JSON {path}: {exc}") from None
    if "id" not in doc:
        raise ValueError(f"model JSON {path} lacks an 'id' field")
    hyper = dict(doc.get("hyper", {}))
    if "data" in doc:
        hyper["data"] = doc["data"]
    return catalog(doc["id"], hyper)
