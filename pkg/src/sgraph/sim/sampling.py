"""Degree sequences from Po_S(mu) and simple S-graphs by rejection."""

from __future__ import annotations

import numpy as np

from ..chareq import solve_char_eq
from ..degree_set import DegreeSet, admissible_n
from ..genfun import series_terms
from .graph import DegreeCounts, MultiGraph, configuration_multigraph, degree_counts_from_sequence

__all__ = [
    "SamplingError",
    "SimplicityRejectionError",
    "sample_degree_sequence",
    "sample_simple_graph",
    "sample_multigraph",
]

MAX_PARITY_REDRAWS = 10_000


class SamplingError(ValueError):
    """Degree sampling is impossible for the requested (S, n)."""


class SimplicityRejectionError(RuntimeError):
    """No simple graph was obtained within the attempt budget."""

    def __init__(self, attempts: int, accepted: int = 0):
        self.attempts = attempts
        self.acceptance_estimate = accepted / attempts if attempts else 0.0
        # one-sided 95% upper bound on the acceptance probability with 0 successes
        self.acceptance_upper_95 = 1 - 0.05 ** (1 / attempts) if attempts else 1.0
        super().__init__(
            f"no simple graph in {attempts} attempts "
            f"(acceptance estimate {self.acceptance_estimate:.3g}, "
            f"95% upper bound {self.acceptance_upper_95:.3g})")


def sample_degree_sequence(S: DegreeSet, mu: float, n: int,
                           rng: np.random.Generator) -> DegreeCounts:
    """n i.i.d. Po_S(mu) degrees by inverse cdf, repaired to an even total.

    If the total is odd, one uniformly chosen vertex has its degree redrawn
    until the total is even.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not admissible_n(S, n):
        raise SamplingError(f"no S-graph on n={n} vertices for S={S.label} (parity)")
    ks, pmf = series_terms(S, mu)
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0

    def draw(size):
        return ks[np.searchsorted(cdf, rng.random(size), side="right").clip(0, len(ks) - 1)]

    d = draw(n)
    if d.sum() % 2:
        i = int(rng.integers(n))
        old = d[i] % 2
        for _ in range(MAX_PARITY_REDRAWS):
            d[i] = draw(1)[0]
            if d[i] % 2 != old:
                break
        else:
            raise SamplingError("parity repair failed: Po_S(mu) has (numerically) one parity")
    return degree_counts_from_sequence(d)


def _mu_for(S: DegreeSet, lam: float) -> float:
    return solve_char_eq(S, lam).mu_star


def sample_multigraph(S: DegreeSet, lam: float, n: int, rng: np.random.Generator) -> MultiGraph:
    """One configuration-model multigraph with Po_S(mu*(lam)) degrees."""
    return configuration_multigraph(sample_degree_sequence(S, _mu_for(S, lam), n, rng), rng)


def sample_simple_graph(S: DegreeSet, lam: float, n: int, rng: np.random.Generator,
                        max_attempts: int = 200):
    """Resample degrees and pairing until the configuration is simple.

    Returns ``(graph, attempts)``.  Raises :class:`SimplicityRejectionError`
    when ``max_attempts`` configurations were all non-simple.
    """
    if not admissible_n(S, n):
        raise SamplingError(f"no S-graph on n={n} vertices for S={S.label} (parity)")
    mu = _mu_for(S, lam)
    for attempt in range(1, max_attempts + 1):
        G = configuration_multigraph(sample_degree_sequence(S, mu, n, rng), rng)
        if G.simple:
            return G, attempt
    raise SimplicityRejectionError(max_attempts)
