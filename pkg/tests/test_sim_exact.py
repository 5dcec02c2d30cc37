import itertools
import math

import numpy as np
import pytest

from sgraph.degree_set import parse_degree_set as P
from sgraph.sim.exact import (MAX_N, edge_count_monotonicity_exact, enumerate_exact,
                              exact_table)


def brute_force(S, n, p):
    """Plain itertools enumeration of G(n, p) restricted to S-graphs."""
    pairs = list(itertools.combinations(range(n), 2))
    Z = tri = 0.0
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        deg = [0] * n
        adj = set()
        for b, (a, c) in zip(bits, pairs):
            if b:
                deg[a] += 1
                deg[c] += 1
                adj.add((a, c))
        if all(d in S for d in deg):
            e = sum(bits)
            w = p**e * (1 - p) ** (len(pairs) - e)
            Z += w
            t = sum(1 for a, b, c in itertools.combinations(range(n), 3)
                    if (a, b) in adj and (b, c) in adj and (a, c) in adj)
            tri += w * t
    return Z, tri / Z if Z else 0.0


def test_zero_two_closed_form(backend):
    S = P("set:0,2")
    for p in (0.1, 0.3, 0.7):
        q = 1 - p
        r = enumerate_exact(S, 4, p)
        assert r.Z == pytest.approx(q**6 + 4 * p**3 * q**3 + 3 * p**4 * q**2, abs=1e-12)
        assert r.graphs == 8


@pytest.mark.parametrize("n", range(1, MAX_N + 1))
def test_unconstrained_is_one(n, backend):
    r = enumerate_exact(P("ge:0"), n, 0.37)
    assert r.Z == pytest.approx(1.0, abs=1e-12)
    assert r.graphs == 2 ** (n * (n - 1) // 2)
    assert r.expected_edges == pytest.approx(0.37 * n * (n - 1) / 2, rel=1e-12)
    assert r.expected_triangles == pytest.approx(math.comb(n, 3) * 0.37**3, rel=1e-12, abs=1e-15)


def test_only_empty_graph(backend):
    r = enumerate_exact(P("set:0", allow_trivial=True), 5, 0.4)
    assert r.Z == pytest.approx(0.6**10, rel=1e-12)
    assert r.component_law == {5: 1.0}


@pytest.mark.parametrize("spec,n", [("set:0,2", 5), ("odd", 4), ("set:1,2", 5), ("even", 5),
                                    ("set:0,3", 4)])
def test_against_brute_force(spec, n, backend):
    S = P(spec)
    Z, tri = brute_force(S, n, 0.45)
    r = enumerate_exact(S, n, 0.45)
    assert r.Z == pytest.approx(Z, rel=1e-12, abs=1e-300)
    assert r.expected_triangles == pytest.approx(tri, rel=1e-12, abs=1e-15)


def test_laws_are_normalized():
    r = enumerate_exact(P("set:0,1,3"), 6, 0.3)
    assert sum(r.component_law.values()) == pytest.approx(1.0)
    assert sum(r.largest_component_law.values()) == pytest.approx(1.0)
    assert sum(r.law_of_degree_counts.values()) == pytest.approx(1.0)
    assert r.edge_law.sum() == pytest.approx(1.0)
    for key in r.law_of_degree_counts:
        assert sum(key) == 6 and key[2] == 0 and key[4] == 0 and key[5] == 0


def test_perfect_matchings():
    t = exact_table(P("set:1"), 6)
    assert len(t.masks) == 15
    assert np.all(t.edges == 3) and np.all(t.n_components == 3)


def test_edge_monotonicity():
    assert edge_count_monotonicity_exact(P("set:0,2"), 4, 0.2, 0.6)[0]
    assert edge_count_monotonicity_exact(P("ge:0"), 4, 0.1, 0.9)[0]
    with pytest.raises(ValueError):
        edge_count_monotonicity_exact(P("ge:0"), 4, 0.5, 0.5)


def test_triangles_not_monotone():
    ps = np.linspace(0.05, 0.95, 19)
    tri = [enumerate_exact(P("set:0,2"), 4, float(p)).expected_triangles for p in ps]
    i = int(np.argmax(tri))
    assert 0 < i < len(ps) - 1


def test_domain():
    with pytest.raises(ValueError):
        exact_table(P("ge:0"), MAX_N + 1)
    with pytest.raises(ValueError):
        enumerate_exact(P("ge:0"), 3, 1.0)
