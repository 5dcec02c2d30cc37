import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from sgraph import _kernels


def random_multigraph(rng, n, m):
    return rng.integers(0, n, m).astype(np.int64), rng.integers(0, n, m).astype(np.int64)


def test_component_labels(kernels, rng):
    n = 2000
    u, v = random_multigraph(rng, n, 900)
    lab = kernels.component_labels(n, u, v)
    A = coo_matrix((np.ones(len(u)), (u, v)), shape=(n, n))
    k, ref = connected_components(A, directed=False)
    assert len(np.unique(lab)) == k
    # same partition, labels are the component minima
    for c in range(k):
        members = np.nonzero(ref == c)[0]
        assert np.all(lab[members] == members.min())


def test_kcore_mask_peeling(kernels, rng):
    n = 500
    u, v = random_multigraph(rng, n, 900)
    alive = kernels.kcore_mask(n, u, v, 3)
    keep = alive[u] & alive[v]
    deg = np.bincount(u[keep], minlength=n) + np.bincount(v[keep], minlength=n)
    assert np.all(deg[alive] >= 3)
    # maximality: a naive peel from scratch gives the same set
    live = np.ones(n, bool)
    while True:
        k2 = live[u] & live[v]
        d = np.bincount(u[k2], minlength=n) + np.bincount(v[k2], minlength=n)
        drop = live & (d < 3)
        if not drop.any():
            break
        live &= ~drop
    assert np.array_equal(alive.astype(bool), live)


def test_enumerate_masks(kernels):
    n = 5
    allowed = np.array([1, 0, 1, 0, 1], np.uint8)
    masks = np.asarray(kernels.enumerate_s_masks(n, allowed))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    ref = []
    for m in range(1 << len(pairs)):
        deg = [0] * n
        for b, (i, j) in enumerate(pairs):
            if m >> b & 1:
                deg[i] += 1
                deg[j] += 1
        if all(allowed[d] for d in deg):
            ref.append(m)
    assert masks.tolist() == ref


def test_backends_agree(rng):
    if _kernels.compiled is None:
        pytest.skip("compiled kernels not built")
    c, p = _kernels.compiled, _kernels.python
    n = 3000
    u, v = random_multigraph(rng, n, 4000)
    assert np.array_equal(c.component_labels(n, u, v), p.component_labels(n, u, v))
    for k in (2, 3, 4):
        assert np.array_equal(c.kcore_mask(n, u, v, k), p.kcore_mask(n, u, v, k))
    allowed = np.array([1, 1, 0, 1, 1, 0], np.uint8)
    mc = c.enumerate_s_masks(6, allowed)
    assert np.array_equal(mc, p.enumerate_s_masks(6, allowed))
    for a, b in zip(c.mask_statistics(6, mc), p.mask_statistics(6, mc)):
        assert np.array_equal(a, b)


def test_empty_inputs(kernels):
    e = np.zeros(0, np.int64)
    assert kernels.component_labels(3, e, e).tolist() == [0, 1, 2]
    assert not kernels.kcore_mask(3, e, e, 2).any()


def test_pure_python_switch():
    env = dict(os.environ, SGRAPH_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from sgraph import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
