"""Asymptotic giant-component and k-core predictions.

Everything is a function of the limiting degree law Po_S(mu*) with
masses ``p_j``:

* giant component: ``chi(xi) = nu xi^2 - sum_j j p_j xi^j`` has a unique
  root ``xi*`` in (0, 1) when ``Q > 0`` and ``1 in S``; the giant holds a
  fraction ``1 - sum_j p_j xi*^j`` of the vertices and
  ``nu (1 - xi*^2) / 2`` edges per vertex.
* k-core: thin every degree ``w`` to ``Bin(w, r)``; ``r_hat`` is the
  largest ``r`` with ``nu r^2 = h(r)``.

Functions taking ``lam`` resolve ``mu*`` through :mod:`sgraph.chareq` and
raise on tied maximizers; pass ``mu`` directly to probe a branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .chareq import _zoom_min, solve_char_eq
from .degree_set import DegreeSet
from .genfun import pos_mean, q_value, series_terms

__all__ = [
    "GiantPrediction",
    "CorePrediction",
    "StructureError",
    "Q_ZERO_TOL",
    "chi",
    "giant_prediction",
    "gw_extinction",
    "thinned_pmf",
    "h",
    "h_bar",
    "core_prediction",
    "giant_monotonicity_check",
    "giant_threshold",
    "core_threshold",
]

# |Q| below this (relative to nu) is treated as the critical value 0
Q_ZERO_TOL = 1e-10


class StructureError(ValueError):
    """A prediction was requested outside the range where it is defined."""


@dataclass(frozen=True)
class GiantPrediction:
    mu: float
    Q: float
    xi_star: float
    gamma_star: float  # fraction of vertices
    zeta_star: float  # edges per vertex
    case: str  # "i" | "ii" | "iii"


@dataclass(frozen=True)
class CorePrediction:
    mu: float
    k: int
    r_hat: float
    vertex_fraction: float
    edge_fraction: float  # edges per vertex
    degenerate_boundary: bool
    r_hat_alt: float | None = None  # next transversal crossing when r_hat is a tangency


def _resolve_mu(S: DegreeSet, lam, mu) -> float:
    if (lam is None) == (mu is None):
        raise ValueError("give exactly one of lam and mu")
    if mu is not None:
        mu = float(mu)
        if mu < 0 or not math.isfinite(mu):
            raise ValueError("mu must be finite and non-negative")
        if mu == 0 and 0 not in S:
            raise StructureError("mu = 0 needs 0 in S")
        return mu
    return solve_char_eq(S, float(lam)).mu_star


def _degree_law(S: DegreeSet, mu: float):
    ks, p = series_terms(S, mu)
    return ks.astype(float), p


def _check_not_02(S: DegreeSet):
    if S.is_finite and set(int(k) for k in S.members(S.max_element)) <= {0, 2}:
        raise StructureError("no giant-component prediction for S contained in {0, 2}")


# -- giant component --------------------------------------------------------


def chi(S: DegreeSet, mu: float, xi):
    """chi_mu(xi) = nu xi^2 - sum_j j p_j xi^j for the law Po_S(mu)."""
    xi_a = np.asarray(xi, dtype=float)
    if np.any((xi_a < 0) | (xi_a > 1)):
        raise ValueError("xi must lie in [0, 1]")
    ks, p = _degree_law(S, mu)
    nu = float(np.dot(ks, p))
    x = xi_a[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = np.where(ks == 0, 1.0, x ** ks)
    val = nu * xi_a**2 - (ks * p * pw).sum(axis=-1)
    return float(val) if val.ndim == 0 else val


def _chi_over_xi(ks, p, nu, xi):
    """chi(xi) / xi, which starts at -p_1 and avoids underflow near 0."""
    x = np.asarray(xi, dtype=float)[..., None]
    km1 = np.maximum(ks - 1, 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = np.where(km1 == 0, 1.0, x ** km1)
    return nu * np.asarray(xi) - (ks * p * pw).sum(axis=-1)


def _xi_star(ks, p, nu, tol):
    f = lambda x: _chi_over_xi(ks, p, nu, x)
    lo, hi = tol, 1.0 - tol
    if not (f(lo) < 0 < f(hi)):
        grid = np.linspace(1e-4, 1 - 1e-4, 9999)
        fg = f(grid)
        idx = np.nonzero((fg[:-1] < 0) & (fg[1:] >= 0))[0]
        if len(idx) == 0:
            return None
        lo, hi = grid[idx[-1]], grid[idx[-1] + 1]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16:
            break
    return 0.5 * (lo + hi)


def giant_prediction(S: DegreeSet, lam: float | None = None, mu: float | None = None,
                     tol: float = 1e-13) -> GiantPrediction:
    """Predicted giant-component fractions at ``lam`` (via mu*) or at ``mu``."""
    _check_not_02(S)
    mu = _resolve_mu(S, lam, mu)
    if mu == 0:
        return GiantPrediction(0.0, 0.0, 1.0, 0.0, 0.0, "iii")
    ks, p = _degree_law(S, mu)
    nu = float(np.dot(ks, p))
    Q = float(q_value(S, mu))
    if Q <= Q_ZERO_TOL * max(nu, 1.0):
        return GiantPrediction(mu, Q, 1.0, 0.0, 0.0, "iii")
    if 1 not in S:
        p0 = float(p[0]) if ks[0] == 0 else 0.0
        return GiantPrediction(mu, Q, 0.0, 1.0 - p0, 0.5 * nu, "ii")
    xi = _xi_star(ks, p, nu, tol)
    if xi is None:
        raise StructureError(f"no interior root of chi at mu={mu!r} although Q > 0")
    gamma = 1.0 - float(np.dot(p, xi**ks))
    return GiantPrediction(mu, Q, xi, gamma, 0.5 * nu * (1 - xi * xi), "i")


def gw_extinction(S: DegreeSet, mu: float, tol: float = 1e-15,
                  max_iter: int = 10_000_000) -> float:
    """Extinction probability of the Galton-Watson process with offspring Po_{S-1}(mu).

    The offspring generating function is ``phi_S'(mu x) / phi_S'(mu)``;
    the result is its smallest fixed point, by monotone iteration from 0.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    T = S.shifted_down()  # raises for S = {0}
    ks, p = _degree_law(T, mu)
    x = 0.0
    for _ in range(max_iter):
        x_new = float(np.dot(p, x**ks)) if x > 0 else float(p[0]) if ks[0] == 0 else 0.0
        if x_new - x <= tol:
            return min(x_new, 1.0)
        x = x_new
    raise StructureError("Galton-Watson iteration did not converge")


# -- k-core -----------------------------------------------------------------


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any((r < 0) | (r > 1)):
        raise ValueError("r must lie in [0, 1]")
    return r


def thinned_pmf(S: DegreeSet, mu: float, r, l: int):
    """P(W_{mu,r} = l) where W_{mu,r} ~ Bin(W, r) and W ~ Po_S(mu)."""
    r = _check_r(r)
    if l < 0:
        raise ValueError("l must be non-negative")
    ks, p = _degree_law(S, mu)
    val = (p * binom.pmf(l, ks, r[..., None])).sum(axis=-1)
    return float(val) if val.ndim == 0 else val


def h(S: DegreeSet, mu: float, k: int, r):
    """E[W_{mu,r} 1{W_{mu,r} >= k}]."""
    r = _check_r(r)
    if k < 1:
        raise ValueError("k must be >= 1")
    ks, p = _degree_law(S, mu)
    rr = r[..., None]
    # E[B 1{B >= k}] = w r P(Bin(w-1, r) >= k-1) for B ~ Bin(w, r)
    tail = binom.sf(k - 2, np.maximum(ks - 1, 0), rr)
    val = (p * ks * rr * np.where(ks >= 1, tail, 0.0)).sum(axis=-1)
    return float(val) if val.ndim == 0 else val


def h_bar(S: DegreeSet, mu: float, k: int, r):
    """P(W_{mu,r} >= k)."""
    r = _check_r(r)
    if k < 1:
        raise ValueError("k must be >= 1")
    ks, p = _degree_law(S, mu)
    val = (p * binom.sf(k - 1, ks, r[..., None])).sum(axis=-1)
    return float(val) if val.ndim == 0 else val


def core_prediction(S: DegreeSet, lam: float | None = None, k: int = 2, mu: float | None = None,
                    tol: float = 1e-12, grid_points: int = 4000) -> CorePrediction:
    """Predicted k-core fractions.

    ``r_hat`` is the highest zero of ``g(r) = nu r^2 - h(r)`` on [0, 1],
    found by scanning from ``r = 1`` down and refining by bisection.  A
    highest zero at which ``g`` does not go negative just below is a
    tangency: ``degenerate_boundary`` is set and the next transversal
    crossing (or 0) is reported as ``r_hat_alt``.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    mu = _resolve_mu(S, lam, mu)
    if mu == 0:
        return CorePrediction(0.0, k, 0.0, 0.0, 0.0, False)
    nu = float(pos_mean(S, mu))
    eps = tol * max(nu, 1.0)

    def g(r):
        r = np.asarray(r, dtype=float)
        return nu * r * r - np.asarray(h(S, mu, k, r))

    rs = np.linspace(0.0, 1.0, grid_points + 1)[1:]
    gs = g(rs)

    def finish(r_hat, degenerate, alt=None):
        vf = float(h_bar(S, mu, k, r_hat)) if r_hat > 0 else 0.0
        return CorePrediction(mu, k, float(r_hat), vf, float(0.5 * nu * r_hat**2), degenerate, alt)

    def crossing_below(j):
        """Transversal crossing in (rs[j], rs[j+1]) with g(rs[j]) < 0 <= g(rs[j+1])."""
        lo, hi = rs[j], rs[j + 1]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if g(mid) < 0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15:
                break
        return 0.5 * (lo + hi)

    # dips below zero that the grid misses: refine local minima of g
    neg = gs < -eps
    for i in range(1, len(rs) - 1):
        if not neg[i] and gs[i] <= gs[i - 1] and gs[i] <= gs[i + 1]:
            x, v = _zoom_min(g, rs[i - 1], rs[i + 1])
            if v < -eps:
                neg[i] = True
                gs[i] = v
                rs[i] = x

    def highest_crossing(upto):
        idx = np.nonzero(neg[:upto])[0]
        if len(idx) == 0:
            return 0.0
        j = int(idx[-1])
        if j == len(rs) - 1:
            return 1.0
        return crossing_below(j)

    if abs(gs[-1]) <= eps:
        # r = 1 is itself a zero; side condition needs g < 0 just below 1
        if neg[-2]:
            return finish(1.0, False)
        return finish(1.0, True, highest_crossing(len(rs) - 1))

    r_hat = highest_crossing(len(rs))
    # tangential touches above the crossing
    lo_idx = int(np.searchsorted(rs, r_hat))
    for i in range(max(lo_idx, 1), len(rs) - 1):
        if gs[i] <= gs[i - 1] and gs[i] <= gs[i + 1] and gs[i] <= 1e3 * eps:
            x, v = _zoom_min(g, rs[i - 1], rs[i + 1])
            if abs(v) <= eps and x > r_hat:
                return finish(x, True, r_hat)
    return finish(r_hat, False)


# -- monotonicity and thresholds -------------------------------------------


def _sign(x, band):
    return 0 if abs(x) <= band else (1 if x > 0 else -1)


def giant_monotonicity_check(S: DegreeSet, lambda_grid):
    """Check gamma* non-decreasing, xi* non-increasing and the sign relation for Q.

    Sign relation: ``sign Q(mu) = sign(nu_{S-1}(mu) - 1)`` where ``nu_{S-1}`` is the
    mean of the shifted law Po_{S-1}(mu) (checked for mu* > 0).
    Returns ``(ok, violation)``; ``violation`` is None or a dict.
    """
    _check_not_02(S)
    lams = [float(l) for l in lambda_grid]
    if any(b < a for a, b in zip(lams, lams[1:])):
        raise ValueError("lambda_grid must be sorted")
    T = S.shifted_down() if S.max_element != 0 else None
    prev = None
    for lam in lams:
        res = solve_char_eq(S, lam)
        preds = [giant_prediction(S, mu=m) for m in sorted(res.maximizers)]
        for g in preds:
            if g.mu > 0 and T is not None:
                nu = float(pos_mean(S, g.mu))
                s_q = _sign(g.Q, Q_ZERO_TOL * max(nu, 1.0))
                s_t = _sign(float(pos_mean(T, g.mu)) - 1.0, Q_ZERO_TOL * max(1.0, 1.0 / nu))
                if s_q != s_t:
                    return False, {"check": "q_sign", "lambda": lam, "mu": g.mu, "Q": g.Q}
        lo, hi = preds[0], preds[-1]
        if prev is not None:
            if lo.gamma_star < prev.gamma_star - 1e-10:
                return False, {"check": "gamma", "lambda": lam,
                               "from": prev.gamma_star, "to": lo.gamma_star}
            if lo.xi_star > prev.xi_star + 1e-10:
                return False, {"check": "xi", "lambda": lam,
                               "from": prev.xi_star, "to": lo.xi_star}
        prev = hi
    return True, None


def _bisect_predicate(pred, lo, hi, tol):
    if pred(lo) or not pred(hi):
        raise StructureError(f"predicate does not change from False to True on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def giant_threshold(S: DegreeSet, lo: float, hi: float, tol: float = 1e-9) -> float:
    """Smallest lambda in [lo, hi] with Q(mu*(lambda)) > 0, by bisection."""
    _check_not_02(S)

    def pred(lam):
        mu = solve_char_eq(S, lam).mu_star_max
        return mu > 0 and float(q_value(S, mu)) > Q_ZERO_TOL * max(float(pos_mean(S, mu)), 1.0)

    return _bisect_predicate(pred, lo, hi, tol)


def core_threshold(S: DegreeSet, k: int, lo: float, hi: float, tol: float = 1e-6) -> float:
    """Smallest lambda in [lo, hi] with a non-empty predicted k-core, by bisection."""

    def pred(lam):
        mu = solve_char_eq(S, lam).mu_star_max
        return core_prediction(S, k=k, mu=mu).r_hat > 0

    return _bisect_predicate(pred, lo, hi, tol)
