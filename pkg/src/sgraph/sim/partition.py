"""The multigraph partition function as a power series.

    Z* = sum_N (2N - 1)!! nu^N c_{2N},    c_m = [x^m] phi_S(x)^n.

``c_m`` is computed as ``phi_S(s)^n s^-m P(X_1 + ... + X_n = m)`` with
``X_i ~ Po_S(s)`` i.i.d., so the convolution power only ever handles
probabilities; the scale ``s`` is mu*(n nu), where the terms concentrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from ..chareq import solve_char_eq
from ..degree_set import DegreeSet
from ..genfun import eval_genfun

__all__ = ["PartitionSeries", "PartitionError", "multigraph_partition_series"]


class PartitionError(RuntimeError):
    """The series tail is not below the requested bound at the given cutoffs."""


@dataclass(frozen=True)
class PartitionSeries:
    n: int
    nu: float
    log_Z_star: float
    tail_estimate: float  # relative to Z*
    N_cutoff: int
    degree_cutoff: int
    scale: float

    @property
    def per_vertex(self) -> float:
        return self.log_Z_star / self.n


def _conv_power(w: np.ndarray, n: int, M: int) -> np.ndarray:
    """Coefficients 0..M of (sum_k w_k x^k)^n by binary powering."""
    out = np.zeros(M + 1)
    out[0] = 1.0
    base = w[: M + 1].copy()
    while n:
        if n & 1:
            out = np.convolve(out, base)[: M + 1]
        n >>= 1
        if n:
            base = np.convolve(base, base)[: M + 1]
    return out


def _log_terms(S, n, nu, s, log_phi_s, D, Nc):
    M = 2 * Nc
    ks = np.arange(D + 1)
    member = np.array([k in S for k in ks])
    with np.errstate(divide="ignore"):
        logw = np.where(member, ks * math.log(s) - gammaln(ks + 1.0) - log_phi_s, -np.inf)
    w = np.exp(logw)
    pi = _conv_power(w, n, M)
    N = np.arange(Nc + 1)
    m = 2 * N
    with np.errstate(divide="ignore"):
        log_pi = np.log(pi[m])
    log_dfact = gammaln(m + 1.0) - N * math.log(2) - gammaln(N + 1.0)
    lost = max(0.0, 1.0 - float(w.sum()))  # per-vertex mass above the degree cutoff
    return log_dfact + N * math.log(nu) + n * log_phi_s - m * math.log(s) + log_pi, lost


def multigraph_partition_series(S: DegreeSet, n: int, nu: float,
                                degree_cutoff: int | None = None,
                                N_cutoff: int | None = None,
                                tail_tol: float = 1e-10) -> PartitionSeries:
    """log Z* with a tail estimate relative to Z*.

    Without ``N_cutoff`` the edge cutoff is doubled until the estimated
    tail drops below ``tail_tol``; with one, :class:`PartitionError` is
    raised if it does not.  ``degree_cutoff`` defaults to ``2 N_cutoff``
    (no degree truncation below the edge cutoff).
    """
    if not nu > 0:
        raise ValueError("nu must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    if S.is_trivial:
        return PartitionSeries(n, nu, 0.0, 0.0, 0, 0, 1.0)
    res = solve_char_eq(S, n * nu)
    s = res.mu_star_max if res.mu_star_max > 0 else 1.0
    log_phi_s = eval_genfun(S, s).log_phi
    auto = N_cutoff is None
    Nc = N_cutoff if not auto else max(8, int(math.ceil(n * max(s * s / (n * nu), 1.0))))
    while True:
        D = degree_cutoff if degree_cutoff is not None else 2 * Nc
        if S.max_element is not None:
            D = min(D, S.max_element)
        lt, lost = _log_terms(S, n, nu, s, log_phi_s, D, Nc)
        log_Z = float(logsumexp(lt))
        # geometric tail from the ratio of the last two non-empty terms
        fin = np.nonzero(np.isfinite(lt))[0]
        if len(fin) < 2:
            tail = 0.0 if len(fin) and fin[-1] < Nc - 1 else math.inf
        else:
            a, b = fin[-2], fin[-1]
            log_ratio = (lt[b] - lt[a]) / (b - a)
            if b < Nc:  # series terminates before the cutoff (finite S)
                tail = 0.0
            elif log_ratio < 0:
                tail = math.exp(lt[b] + log_ratio - log_Z) / (1 - math.exp(log_ratio))
            else:
                tail = math.inf
        if D < 2 * Nc and (S.max_element is None or D < S.max_element):
            # graphs with a vertex above the degree cutoff are missing
            tail += n * lost
        if tail < tail_tol:
            return PartitionSeries(n, nu, log_Z, tail, Nc, D, s)
        if not auto or Nc > 1_000_000:
            raise PartitionError(f"tail estimate {tail:.3g} exceeds {tail_tol:g} at N_cutoff={Nc}")
        Nc *= 2
