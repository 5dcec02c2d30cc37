"""Exact laws of G(n, p) conditioned on being an S-graph, for n <= 7.

All S-graphs on n labelled vertices are listed once as edge bitmasks;
their p-independent statistics are tabulated, so evaluating at a new p
is a weighted sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _kernels
from ..degree_set import DegreeSet

__all__ = ["MAX_N", "ExactTable", "ExactResult", "exact_table", "enumerate_exact",
           "edge_count_monotonicity_exact"]

MAX_N = 7


@dataclass(frozen=True)
class ExactTable:
    """Per-S-graph statistics, one entry per labelled S-graph on n vertices."""

    n: int
    masks: np.ndarray
    edges: np.ndarray
    triangles: np.ndarray
    n_components: np.ndarray
    largest_component: np.ndarray
    degree_counts: np.ndarray  # shape (graphs, n): column j counts degree-j vertices
    degree_keys: np.ndarray  # distinct rows of degree_counts
    degree_index: np.ndarray  # row of degree_keys for every graph

    @property
    def pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    def weights(self, p: float) -> np.ndarray:
        """p^e (1-p)^(C(n,2) - e) for every listed graph."""
        return p ** self.edges * (1 - p) ** (self.pairs - self.edges)

    def edge_histogram(self) -> np.ndarray:
        """Number of S-graphs with e edges, e = 0..C(n,2)."""
        return np.bincount(self.edges, minlength=self.pairs + 1)


@dataclass(frozen=True)
class ExactResult:
    n: int
    p: float
    Z: float  # P(G(n, p) is an S-graph)
    edge_law: np.ndarray  # conditional P(e = j), j = 0..C(n,2)
    expected_edges: float
    expected_triangles: float
    component_law: dict  # number of components -> probability
    largest_component_law: dict  # vertices in the largest component -> probability
    law_of_degree_counts: dict  # (n_0, ..., n_{n-1}) -> probability
    graphs: int  # number of labelled S-graphs

    @property
    def prob_S_graph(self) -> float:
        return self.Z


@lru_cache(maxsize=64)
def _cached_table(S: DegreeSet, n: int) -> ExactTable:
    allowed = np.array([d in S for d in range(max(n, 1))], dtype=np.uint8)
    masks = np.asarray(_kernels.enumerate_s_masks(n, allowed), dtype=np.int64)
    edges, tri, ncomp, big, dc = _kernels.mask_statistics(n, masks)
    # encode degree-count rows as base-(n+1) integers to group them quickly
    code = dc @ (n + 1) ** np.arange(n, dtype=np.int64) if n else np.zeros(len(masks), np.int64)
    _, first, index = np.unique(code, return_index=True, return_inverse=True)
    return ExactTable(n, masks, edges, tri, ncomp, big, dc, dc[first], index)


def exact_table(S: DegreeSet, n: int) -> ExactTable:
    """All labelled S-graphs on n vertices with their statistics (cached)."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"exact enumeration needs 0 <= n <= {MAX_N}")
    return _cached_table(S, int(n))


def enumerate_exact(S: DegreeSet, n: int, p: float) -> ExactResult:
    """Exact law of G(n, p) given that it is an S-graph."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    t = exact_table(S, n)
    w = t.weights(p)
    Z = float(w.sum())
    if Z == 0:
        q = w
        edge_law = np.zeros(t.pairs + 1)
    else:
        q = w / Z
        edge_law = np.bincount(t.edges, weights=q, minlength=t.pairs + 1)

    def law(values):
        probs = np.bincount(values, weights=q)
        return {int(k): float(probs[k]) for k in np.unique(values)}

    dprobs = np.bincount(t.degree_index, weights=q, minlength=len(t.degree_keys))

    return ExactResult(
        n=n, p=p, Z=Z, edge_law=edge_law,
        expected_edges=float(np.dot(q, t.edges)),
        expected_triangles=float(np.dot(q, t.triangles)),
        component_law=law(t.n_components),
        largest_component_law=law(t.largest_component),
        law_of_degree_counts={tuple(int(v) for v in key): float(x)
                              for key, x in zip(t.degree_keys, dprobs)},
        graphs=len(t.masks),
    )


def edge_count_monotonicity_exact(S: DegreeSet, n: int, p1: float, p2: float,
                                  tol: float = 1e-12):
    """Is e(G_{n,p1,S}) stochastically smaller than e(G_{n,p2,S})?

    Compares exact cdfs.  Returns ``(ok, worst)`` where ``worst`` is the
    largest amount by which the p2 cdf exceeds the p1 cdf.
    """
    if not p1 < p2:
        raise ValueError("need p1 < p2")
    c1 = np.cumsum(enumerate_exact(S, n, p1).edge_law)
    c2 = np.cumsum(enumerate_exact(S, n, p2).edge_law)
    worst = float(np.max(c2 - c1))
    return worst <= tol, worst
