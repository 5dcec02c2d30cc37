"""Stable evaluation of the exponential generating function of a degree set.

For a degree set S,

    phi_S(mu) = sum_{k in S} mu**k / k!

Everything here works with log-shifted Poisson weights, so ``mu`` in the
hundreds or thousands is fine.  The conditioned law ``Po_S(mu)`` is the
Poisson(mu) law restricted to S and renormalized.

Most functions accept a scalar or an array for ``mu`` and return the same
shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .degree_set import DegreeSet

__all__ = [
    "DEFAULT_REL_TOL",
    "GenFunEval",
    "UndefinedAtZero",
    "eval_genfun",
    "series_terms",
    "pos_pmf",
    "pos_pmf_array",
    "pos_cdf",
    "pos_mean",
    "q_value",
    "psi",
    "psi_check",
    "psi_tilde",
    "lambda_hat",
    "inv_lambda_hat",
    "lambda_hat_limit_at_zero",
    "truncation_point",
]

DEFAULT_REL_TOL = 1e-12


class UndefinedAtZero(ValueError):
    """A ratio of the form (...)/phi_S(0) was requested with 0 not in S."""


@dataclass(frozen=True)
class GenFunEval:
    """log phi_S, phi'/phi and phi''/phi at one point ``mu``."""

    mu: float
    log_phi: float
    r1: float
    r2: float
    cutoff_used: int
    tail_bound: float

    @property
    def phi(self) -> float:
        return math.exp(self.log_phi)

    @property
    def nu(self) -> float:
        """Mean of Po_S(mu)."""
        return self.mu * self.r1


def truncation_point(S: DegreeSet, mu_max: float, rel_tol: float = DEFAULT_REL_TOL) -> int:
    """Largest degree kept when summing the series up to ``mu_max``.

    Start at ``max(ceil(2 e mu), min S + 40)``; past ``2 e mu`` consecutive
    Poisson terms shrink by at least a factor 2, so the remaining tail is
    bounded geometrically.  Extend until the bound (weighted by k^2 so the
    second moment is covered too) is below ``rel_tol`` of the partial sum.
    """
    if S.is_finite:
        return int(S.max_element)
    if mu_max <= 0:
        return int(S.min_element) + 40
    # round mu up onto a coarse geometric grid so the result can be cached
    mu_q = 1.05 ** math.ceil(math.log(mu_max) / math.log(1.05))
    return _truncation(S, max(mu_q, mu_max), rel_tol)


@lru_cache(maxsize=4096)
def _truncation(S: DegreeSet, mu_max: float, rel_tol: float) -> int:
    K = max(int(math.ceil(2 * math.e * mu_max)), int(S.min_element) + 40)
    while True:
        ks = S.members(K)
        logt = ks * math.log(mu_max) - gammaln(ks + 1.0)
        m = logt.max()
        log_partial = m + math.log(np.exp(logt - m).sum())
        q = mu_max / (K + 1)
        log_tK = K * math.log(mu_max) - math.lgamma(K + 1.0)
        log_tail = log_tK + math.log(q / (1 - q)) + 2 * math.log(K + 1.0) - 3 * math.log1p(-q)
        if log_tail - log_partial < math.log(rel_tol):
            return K
        K = int(K * 1.25) + 1


@lru_cache(maxsize=512)
def _members(S: DegreeSet, K: int):
    ks = S.members(K)
    kf = ks.astype(float)
    return ks, kf, gammaln(kf + 1.0)


def _tail_ratio(S: DegreeSet, mu: np.ndarray, K: int, log_phi: np.ndarray) -> np.ndarray:
    """Geometric bound on sum_{k>K, k in S} mu^k/k!, relative to phi."""
    if S.is_finite:
        return np.zeros_like(mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = mu / (K + 1)
        log_tK = K * np.log(mu) - math.lgamma(K + 1.0)
        out = np.exp(log_tK + np.log(q) - np.log1p(-q) - log_phi)
    return np.where(mu > 0, out, 0.0)


def _raw(S: DegreeSet, mu, rel_tol: float = DEFAULT_REL_TOL):
    """Vectorized core.

    Returns ``(mu, log_phi, m1, m2, mqq, K, tail)`` as arrays, where
    ``m1 = E k``, ``m2 = E k(k-1)`` and ``mqq = E k(k-2)`` under Po_S(mu).
    Entries with mu == 0 and 0 not in S carry NaN moments and -inf log_phi.
    """
    mu = np.asarray(mu, dtype=float)
    if np.any(~np.isfinite(mu)):
        raise ValueError("mu must be finite")
    if np.any(mu < 0):
        raise ValueError("mu must be non-negative")
    flat = np.atleast_1d(mu).ravel()
    mu_max = float(flat.max()) if flat.size else 0.0
    K = truncation_point(S, mu_max, rel_tol)
    ks, kf, lg = _members(S, K)

    log_phi = np.empty_like(flat)
    m1 = np.empty_like(flat)
    m2 = np.empty_like(flat)
    mqq = np.empty_like(flat)

    pos = flat > 0
    if pos.any():
        lm = np.log(flat[pos])
        L = np.outer(lm, kf) - lg
        top = L.max(axis=1, keepdims=True)
        w = np.exp(L - top)
        s0 = w.sum(axis=1)
        log_phi[pos] = top[:, 0] + np.log(s0)
        m1[pos] = (w @ kf) / s0
        m2[pos] = (w @ (kf * (kf - 1))) / s0
        mqq[pos] = (w @ (kf * (kf - 2))) / s0
    zero = ~pos
    if zero.any():
        if 0 in S:
            log_phi[zero] = 0.0
            m1[zero] = 0.0
            m2[zero] = 0.0
            mqq[zero] = 0.0
        else:
            log_phi[zero] = -np.inf
            m1[zero] = np.nan
            m2[zero] = np.nan
            mqq[zero] = np.nan
    tail = _tail_ratio(S, flat, K, log_phi)
    shape = mu.shape
    return (flat.reshape(shape), log_phi.reshape(shape), m1.reshape(shape),
            m2.reshape(shape), mqq.reshape(shape), K, tail.reshape(shape))


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _require_defined(S: DegreeSet, mu):
    if 0 not in S and np.any(np.asarray(mu) == 0):
        raise UndefinedAtZero("Po_S(0) is undefined when 0 is not in S")


def eval_genfun(S: DegreeSet, mu: float, rel_tol: float = DEFAULT_REL_TOL) -> GenFunEval:
    """Evaluate log phi_S(mu), phi'/phi and phi''/phi.

    At ``mu == 0`` the values are exact: ``phi(0) = [0 in S]``,
    ``phi'(0) = [1 in S]``, ``phi''(0) = [2 in S]``; ratio queries raise
    :class:`UndefinedAtZero` when 0 is not in S.
    """
    if not (0 < rel_tol <= 1e-6):
        raise ValueError("rel_tol must lie in (0, 1e-6]")
    mu = float(mu)
    if mu < 0 or not math.isfinite(mu):
        raise ValueError("mu must be finite and non-negative")
    if mu == 0:
        _require_defined(S, mu)
        return GenFunEval(0.0, 0.0, float(1 in S), float(2 in S),
                          truncation_point(S, 0.0, rel_tol), 0.0)
    _, log_phi, m1, m2, _, K, tail = _raw(S, mu, rel_tol)
    return GenFunEval(mu, float(log_phi), float(m1) / mu, float(m2) / mu**2, K, float(tail))


def series_terms(S: DegreeSet, mu: float, rel_tol: float = DEFAULT_REL_TOL):
    """Return ``(ks, pmf)``: the support of Po_S(mu) (truncated) and its masses."""
    mu = float(mu)
    if mu < 0:
        raise ValueError("mu must be non-negative")
    _require_defined(S, mu)
    if mu == 0:
        return np.array([0], dtype=np.int64), np.array([1.0])
    K = truncation_point(S, mu, rel_tol)
    ks, kf, lg = _members(S, K)
    L = kf * math.log(mu) - lg
    w = np.exp(L - L.max())
    return ks, w / w.sum()


pos_pmf_array = series_terms


def pos_pmf(S: DegreeSet, mu: float, k: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """P(X = k) for X ~ Po_S(mu)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    mu = float(mu)
    _require_defined(S, mu)
    if k not in S:
        return 0.0
    if mu == 0:
        return 1.0 if k == 0 else 0.0
    _, log_phi, *_ = _raw(S, mu, rel_tol)
    return math.exp(k * math.log(mu) - math.lgamma(k + 1.0) - float(log_phi))


def pos_cdf(S: DegreeSet, mu: float, k: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """P(X <= k) for X ~ Po_S(mu)."""
    ks, p = series_terms(S, mu, rel_tol)
    return float(min(1.0, p[ks <= k].sum()))


def pos_mean(S: DegreeSet, mu, rel_tol: float = DEFAULT_REL_TOL):
    """nu(mu) = mu phi'(mu) / phi(mu), the mean of Po_S(mu)."""
    _require_defined(S, mu)
    return _out(_raw(S, mu, rel_tol)[2])


def q_value(S: DegreeSet, mu, rel_tol: float = DEFAULT_REL_TOL):
    """Q(mu) = sum_j j (j - 2) Po_S(mu){j}, the giant-component functional."""
    _require_defined(S, mu)
    return _out(_raw(S, mu, rel_tol)[4])


def psi(S: DegreeSet, mu, rel_tol: float = DEFAULT_REL_TOL):
    """psi_S(mu) = log phi(mu) - mu phi'(mu) / (2 phi(mu))."""
    _require_defined(S, mu)
    _, log_phi, m1, *_ = _raw(S, mu, rel_tol)
    return _out(log_phi - 0.5 * m1)


def psi_check(S: DegreeSet, mu, lam: float, rel_tol: float = DEFAULT_REL_TOL):
    """log phi(mu) - mu^2 / (2 lam); equals -inf at mu = 0 when 0 is not in S."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    mu_a, log_phi, *_ = _raw(S, mu, rel_tol)
    return _out(log_phi - mu_a**2 / (2 * lam))


def psi_tilde(S: DegreeSet, mu, lam: float, rel_tol: float = DEFAULT_REL_TOL):
    """The multigraph selection functional.

    ``log phi + (nu/2) (log(lam phi' / (mu phi)) - 1)`` with ``nu = mu phi'/phi``.
    Continuous at 0: the value there is 0 if 0 is in S, otherwise
    ``s (log(lam s) - 1) / 2 - log s!`` with ``s = min S``.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    mu_a, log_phi, m1, *_ = _raw(S, mu, rel_tol)
    s = int(S.min_element)
    if s == 0:
        at_zero = 0.0
    else:
        at_zero = 0.5 * s * (math.log(lam * s) - 1) - math.lgamma(s + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        # lam phi'/(mu phi) = lam * nu / mu^2
        inner = np.log(lam * m1 / mu_a**2) - 1.0
        val = log_phi + 0.5 * m1 * inner
        # nu -> 0 faster than the log blows up when 1 is not in S
        val = np.where(m1 == 0, log_phi, val)
    val = np.where(mu_a == 0, at_zero, val)
    return _out(val)


def lambda_hat(S: DegreeSet, mu, rel_tol: float = DEFAULT_REL_TOL):
    """mu phi(mu) / phi'(mu): the value of lambda for which mu solves the
    characteristic equation."""
    if np.any(np.asarray(mu) <= 0):
        raise ValueError("lambda_hat needs mu > 0")
    mu_a, _, m1, *_ = _raw(S, mu, rel_tol)
    with np.errstate(divide="ignore"):
        return _out(mu_a**2 / m1)


def inv_lambda_hat(S: DegreeSet, mu, rel_tol: float = DEFAULT_REL_TOL):
    """phi'(mu) / (mu phi(mu)) = 1 / lambda_hat(mu), finite where lambda_hat blows up."""
    if np.any(np.asarray(mu) <= 0):
        raise ValueError("inv_lambda_hat needs mu > 0")
    mu_a, _, m1, *_ = _raw(S, mu, rel_tol)
    return _out(m1 / mu_a**2)


def lambda_hat_limit_at_zero(S: DegreeSet) -> float:
    """lim_{mu -> 0+} lambda_hat(mu): 0, 0, 1 or inf depending on 0, 1, 2 in S."""
    if 0 not in S:
        return 0.0
    if 1 in S:
        return 0.0
    if 2 in S:
        return 1.0
    return math.inf
