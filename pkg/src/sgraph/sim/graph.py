"""Configuration-model multigraphs and their component / k-core observables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import _kernels

__all__ = [
    "DegreeCounts",
    "MultiGraph",
    "ConfigurationError",
    "degree_counts_from_sequence",
    "configuration_multigraph",
    "from_edges",
    "components",
    "k_core",
]


class ConfigurationError(ValueError):
    """A degree sequence that cannot be paired."""


@dataclass(frozen=True)
class DegreeCounts:
    """``counts[j]`` vertices of degree j; ``degrees`` is the per-vertex sequence."""

    counts: np.ndarray
    n: int
    N2: int  # total degree
    degrees: np.ndarray

    def fraction(self, j: int) -> float:
        if self.n == 0 or j >= len(self.counts):
            return 0.0
        return self.counts[j] / self.n


def degree_counts_from_sequence(degrees) -> DegreeCounts:
    d = np.asarray(degrees, dtype=np.int64)
    if d.ndim != 1 or np.any(d < 0):
        raise ValueError("degrees must be a 1-d sequence of non-negative integers")
    counts = np.bincount(d) if len(d) else np.zeros(1, dtype=np.int64)
    return DegreeCounts(counts, len(d), int(d.sum()), d)


@dataclass(frozen=True)
class MultiGraph:
    """A multigraph on vertices 0..n-1 given by its edge list.

    ``pairing`` holds half-edge index pairs when the graph came from a
    configuration, else None.  ``mult_counts[j]`` is the number of vertex
    pairs (a loop pair x=x included) joined by exactly j >= 2 edges.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    loops: int
    mult_counts: dict
    degree_counts: DegreeCounts
    pairing: np.ndarray | None = None

    @property
    def edges(self) -> int:
        return len(self.u)

    @property
    def simple(self) -> bool:
        return self.loops == 0 and not self.mult_counts

    @property
    def log_weight(self) -> float:
        """log w(G) = -loops log 2 - sum_j m_j log j!."""
        return -self.loops * math.log(2) - sum(m * math.lgamma(j + 1)
                                               for j, m in self.mult_counts.items())


def _tally(n: int, u: np.ndarray, v: np.ndarray):
    loops = int(np.count_nonzero(u == v))
    if len(u) == 0:
        return loops, {}
    a, b = np.minimum(u, v), np.maximum(u, v)
    _, mult = np.unique(a * n + b, return_counts=True)
    hist = np.bincount(mult)
    return loops, {int(j): int(hist[j]) for j in range(2, len(hist)) if hist[j]}


def from_edges(n: int, edges) -> MultiGraph:
    """Build a MultiGraph from an explicit edge list (loops allowed)."""
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e) and (e.min() < 0 or e.max() >= n):
        raise ValueError("edge endpoint out of range")
    u, v = e[:, 0].copy(), e[:, 1].copy()
    deg = np.bincount(u, minlength=n) + np.bincount(v, minlength=n)
    loops, mult = _tally(n, u, v)
    return MultiGraph(n, u, v, loops, mult, degree_counts_from_sequence(deg[:n]))


def configuration_multigraph(degrees, rng: np.random.Generator) -> MultiGraph:
    """Uniform random pairing of the half-edges of a degree sequence."""
    dc = degrees if isinstance(degrees, DegreeCounts) else degree_counts_from_sequence(degrees)
    if dc.N2 % 2:
        raise ConfigurationError("total degree is odd")
    stubs = np.repeat(np.arange(dc.n, dtype=np.int64), dc.degrees)
    pairing = rng.permutation(len(stubs)).reshape(-1, 2)
    u, v = stubs[pairing[:, 0]], stubs[pairing[:, 1]]
    loops, mult = _tally(dc.n, u, v)
    return MultiGraph(dc.n, u, v, loops, mult, dc, pairing)


def components(G: MultiGraph) -> dict:
    """Sizes of the two largest components (vertices, edges) and the count.

    Ties in size are broken by the smallest vertex of the component.
    """
    if G.n == 0:
        return dict(largest_vertices=0, largest_edges=0, second_vertices=0,
                    second_edges=0, count=0)
    lab = _kernels.component_labels(G.n, G.u, G.v)
    vsize = np.bincount(lab, minlength=G.n)
    esize = np.bincount(lab[G.u], minlength=G.n) if G.edges else np.zeros(G.n, np.int64)
    roots = np.nonzero(vsize)[0]
    # sort by size descending, then root ascending
    order = roots[np.lexsort((roots, -vsize[roots]))]
    first = order[0]
    second = order[1] if len(order) > 1 else None
    return dict(
        largest_vertices=int(vsize[first]),
        largest_edges=int(esize[first]),
        second_vertices=int(vsize[second]) if second is not None else 0,
        second_edges=int(esize[second]) if second is not None else 0,
        count=int(len(roots)),
    )


def k_core(G: MultiGraph, k: int) -> dict:
    """Vertex and edge counts of the k-core (loops count 2 towards degree)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if G.n == 0:
        return dict(vertices=0, edges=0)
    alive = _kernels.kcore_mask(G.n, G.u, G.v, k)
    return dict(vertices=int(alive.sum()), edges=int(np.count_nonzero(alive[G.u] & alive[G.v])))
