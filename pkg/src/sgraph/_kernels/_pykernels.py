"""Pure numpy/scipy versions of the compiled kernels (same signatures and results)."""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def component_labels(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Label every vertex by the smallest vertex of its component."""
    if n == 0:
        return np.empty(0, dtype=np.int64)
    A = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n, n))
    _, lab = connected_components(A, directed=False)
    # relabel by component minimum
    mins = np.full(lab.max() + 1, n, dtype=np.int64)
    np.minimum.at(mins, lab, np.arange(n, dtype=np.int64))
    return mins[lab]


def kcore_mask(n: int, u: np.ndarray, v: np.ndarray, k: int) -> np.ndarray:
    """Alive mask of the k-core; a loop adds 2 to its vertex degree.

    Peels in rounds: every vertex of current degree < k is removed at once.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    deg = np.bincount(u, minlength=n) + np.bincount(v, minlength=n)
    edge_alive = np.ones(len(u), dtype=bool)
    while True:
        drop = alive & (deg < k)
        if not drop.any():
            return alive
        alive &= ~drop
        hit = edge_alive & (drop[u] | drop[v])
        edge_alive &= ~hit
        du, dv = u[hit], v[hit]
        deg -= np.bincount(du, minlength=n) + np.bincount(dv, minlength=n)


def enumerate_s_masks(n: int, allowed) -> np.ndarray:
    """Edge-subset bitmasks of K_n whose degrees all satisfy ``allowed[d]``."""
    allowed = np.asarray(allowed, dtype=bool)
    m = n * (n - 1) // 2
    masks = np.arange(1 << m, dtype=np.int64)
    deg = np.zeros((len(masks), max(n, 1)), dtype=np.int8)
    e = 0
    for i in range(n):
        for j in range(i + 1, n):
            b = ((masks >> e) & 1).astype(np.int8)
            deg[:, i] += b
            deg[:, j] += b
            e += 1
    ok = allowed[deg[:, :n]].all(axis=1) if n else np.ones(1, dtype=bool)
    return masks[ok]


def mask_statistics(n: int, masks: np.ndarray):
    """Per-mask edges, triangles, component count, largest component, degree counts."""
    masks = np.asarray(masks, dtype=np.int64)
    pairs = list(combinations(range(n), 2))
    index = {e: i for i, e in enumerate(pairs)}
    bits = [((masks >> i) & 1).astype(np.int64) for i in range(len(pairs))]
    edges = np.sum(bits, axis=0) if bits else np.zeros(len(masks), np.int64)
    tri = np.zeros(len(masks), np.int64)
    for a, b, c in combinations(range(n), 3):
        tri += bits[index[a, b]] & bits[index[a, c]] & bits[index[b, c]]
    deg = np.zeros((len(masks), n), np.int64)
    for (a, b), bt in zip(pairs, bits):
        deg[:, a] += bt
        deg[:, b] += bt
    degree_counts = np.stack([(deg == j).sum(axis=1) for j in range(n)], axis=1) if n else \
        np.zeros((len(masks), 0), np.int64)
    # label propagation to component minima, all graphs at once
    lab = np.tile(np.arange(n, dtype=np.int64), (len(masks), 1))
    for _ in range(n):
        changed = False
        for (a, b), bt in zip(pairs, bits):
            on = bt.astype(bool)
            m = np.minimum(lab[:, a], lab[:, b])
            new_a = np.where(on, m, lab[:, a])
            new_b = np.where(on, m, lab[:, b])
            changed |= bool((new_a != lab[:, a]).any() or (new_b != lab[:, b]).any())
            lab[:, a], lab[:, b] = new_a, new_b
        if not changed:
            break
    ncomp = (lab == np.arange(n)).sum(axis=1)
    sizes = np.stack([(lab == r).sum(axis=1) for r in range(n)], axis=1) if n else \
        np.zeros((len(masks), 1), np.int64)
    largest = sizes.max(axis=1) if n else np.zeros(len(masks), np.int64)
    return edges, tri, ncomp, largest, degree_counts
