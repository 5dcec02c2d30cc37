"""Monte Carlo replicates compared against the asymptotic predictions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..chareq import solve_char_eq
from ..degree_set import DegreeSet
from ..genfun import pos_mean, series_terms
from ..structure import StructureError, core_prediction, giant_prediction
from .graph import components, configuration_multigraph, k_core
from .sampling import sample_degree_sequence, sample_simple_graph

__all__ = ["Prediction", "Replicate", "Experiment", "replicate_rng", "predictions", "mc_experiment"]


def replicate_rng(seed: int, r: int) -> np.random.Generator:
    """Independent stream for replicate r, derived from (seed, r) only."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))


@dataclass(frozen=True)
class Prediction:
    mu: float
    half_nu: float  # edges per vertex
    p0: float  # fraction of isolated vertices
    gamma: float  # NaN where no giant prediction exists
    core: dict  # k -> predicted k-core vertex fraction


@dataclass(frozen=True)
class Replicate:
    r: int
    attempts: int
    simple: bool
    tv: float
    edges_per_n: float
    deg0_fraction: float
    largest_fraction: float
    second_fraction: float
    core_fraction: dict  # k -> observed k-core vertex fraction


@dataclass
class Experiment:
    S: DegreeSet
    lam: float
    n: int
    seed: int
    prediction: Prediction
    replicates: list[Replicate] = field(default_factory=list)

    def deviations(self) -> dict:
        """Largest absolute deviation from the prediction over replicates."""
        p = self.prediction
        out = {
            "tv": max(x.tv for x in self.replicates),
            "edges_per_n": max(abs(x.edges_per_n - p.half_nu) for x in self.replicates),
            "deg0_fraction": max(abs(x.deg0_fraction - p.p0) for x in self.replicates),
            "second_fraction": max(x.second_fraction for x in self.replicates),
        }
        if not math.isnan(p.gamma):
            out["largest_fraction"] = max(abs(x.largest_fraction - p.gamma)
                                          for x in self.replicates)
        for k, c in p.core.items():
            out[f"core{k}_fraction"] = max(abs(x.core_fraction[k] - c) for x in self.replicates)
        return out

    def means(self) -> dict:
        reps = self.replicates
        out = {name: float(np.mean([getattr(x, name) for x in reps]))
               for name in ("tv", "edges_per_n", "deg0_fraction", "largest_fraction",
                            "second_fraction")}
        for k in self.prediction.core:
            out[f"core{k}_fraction"] = float(np.mean([x.core_fraction[k] for x in reps]))
        return out


def predictions(S: DegreeSet, lam: float, k_list=()) -> Prediction:
    mu = solve_char_eq(S, lam).mu_star
    ks, pmf = series_terms(S, mu)
    p0 = float(pmf[0]) if ks[0] == 0 else 0.0
    try:
        gamma = giant_prediction(S, mu=mu).gamma_star
    except StructureError:
        gamma = math.nan
    core = {int(k): core_prediction(S, k=int(k), mu=mu).vertex_fraction for k in k_list}
    return Prediction(mu, 0.5 * float(pos_mean(S, mu)) if mu > 0 else 0.0, p0, gamma, core)


def _tv(counts: np.ndarray, n: int, ks: np.ndarray, pmf: np.ndarray) -> float:
    size = max(len(counts), int(ks[-1]) + 1)
    emp = np.zeros(size)
    emp[: len(counts)] = counts / n
    law = np.zeros(size)
    law[ks] = pmf
    return 0.5 * float(np.abs(emp - law).sum())


def mc_experiment(S: DegreeSet, lam: float, n: int, reps: int, k_list=(), seed: int = 0,
                  simple: bool = True, max_attempts: int = 200) -> Experiment:
    """Sample ``reps`` graphs and measure them against the predictions.

    ``simple=True`` samples simple graphs by rejection; ``simple=False``
    keeps the configuration-model multigraph (same degree law, no
    rejection), which is what is feasible when simplicity is rare.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    pred = predictions(S, lam, k_list)
    ks, pmf = series_terms(S, pred.mu)
    exp = Experiment(S, lam, n, seed, pred)
    for r in range(reps):
        rng = replicate_rng(seed, r)
        if simple:
            G, attempts = sample_simple_graph(S, lam, n, rng, max_attempts)
        else:
            G, attempts = configuration_multigraph(
                sample_degree_sequence(S, pred.mu, n, rng), rng), 1
        comp = components(G)
        dc = G.degree_counts
        exp.replicates.append(Replicate(
            r=r, attempts=attempts, simple=G.simple,
            tv=_tv(dc.counts, n, ks, pmf),
            edges_per_n=G.edges / n,
            deg0_fraction=float(dc.fraction(0)),
            largest_fraction=comp["largest_vertices"] / n,
            second_fraction=comp["second_vertices"] / n,
            core_fraction={int(k): k_core(G, int(k))["vertices"] / n for k in k_list},
        ))
    return exp
