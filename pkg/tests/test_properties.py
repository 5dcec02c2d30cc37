import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sgraph.chareq import monotone_mu_star_check, solve_char_eq
from sgraph.degree_set import parse_degree_set
from sgraph.genfun import (lambda_hat, pos_cdf, pos_mean, psi_check, psi_tilde, q_value,
                           series_terms)
from sgraph.sim.graph import configuration_multigraph
from sgraph.structure import giant_monotonicity_check, giant_prediction, gw_extinction

explicit_sets = st.sets(st.integers(0, 15), min_size=2, max_size=7).map(
    lambda s: "set:" + ",".join(map(str, sorted(s))))
family_sets = st.one_of(
    st.sampled_from(["even", "odd"]),
    st.integers(0, 5).map(lambda s: f"ge:{s}"),
    st.integers(2, 7).map(lambda e: f"pow2:{2 ** e}"),
)
degree_sets = st.one_of(explicit_sets, family_sets).map(parse_degree_set)
mus = st.floats(0.01, 25.0)
lams = st.floats(0.05, 10.0)


def not_02(S):
    return not set(S.members(40).tolist()) <= {0, 2}


@given(degree_sets, mus, mus)
def test_stochastic_dominance(S, a, b):
    m1, m2 = min(a, b), max(a, b)
    for k in range(0, 70, 3):
        assert pos_cdf(S, m2, k) <= pos_cdf(S, m1, k) + 1e-12


@given(degree_sets, mus)
def test_pmf_normalized(S, mu):
    _, p = series_terms(S, mu)
    assert abs(p.sum() - 1) < 1e-11
    assert np.all(p >= 0)


@given(degree_sets, mus)
def test_q_identity(S, mu):
    # Q = nu (nu_{S-1} - 1), with nu_{S-1} the mean of the shifted law
    assume(S.max_element != 0 and not (S.is_finite and S.max_element == 0))
    assume(S.min_element is not None)
    T = S.shifted_down()
    nu = pos_mean(S, mu)
    assert q_value(S, mu) == pytest.approx(nu * (pos_mean(T, mu) - 1), rel=1e-9, abs=1e-9)


@given(degree_sets, lams, st.floats(0.05, 20.0))
def test_psi_tilde_dominates(S, lam, mu):
    assert psi_tilde(S, mu, lam) >= psi_check(S, mu, lam) - 1e-10


@settings(max_examples=20 if settings().max_examples < 100 else 300)
@given(degree_sets, st.lists(lams, min_size=3, max_size=8))
def test_mu_star_monotone(S, grid):
    ok, bad = monotone_mu_star_check(S, sorted(grid))
    assert ok, bad


@settings(max_examples=20 if settings().max_examples < 100 else 300)
@given(degree_sets, st.lists(st.floats(0.1, 6.0), min_size=3, max_size=6))
def test_giant_monotone_and_q_sign(S, grid):
    assume(not_02(S))
    ok, bad = giant_monotonicity_check(S, sorted(grid))
    assert ok, bad


@settings(max_examples=20 if settings().max_examples < 100 else 300)
@given(degree_sets, st.floats(0.2, 6.0))
def test_xi_is_extinction_probability(S, lam):
    assume(not_02(S) and 1 in S)
    res = solve_char_eq(S, lam)
    assume(res.unique)
    g = giant_prediction(S, mu=res.mu_star)
    assume(g.mu > 0 and g.case == "i")
    assert g.xi_star == pytest.approx(gw_extinction(S, g.mu), abs=1e-8)


@given(st.sets(st.integers(4, 20), max_size=5), st.floats(1e-3, 40.0))
def test_lambda_hat_above_one(extra, mu):
    S = parse_degree_set("set:" + ",".join(map(str, sorted({0, 2} | extra))))
    assert lambda_hat(S, mu) > 1.0


@given(st.lists(st.integers(0, 6), min_size=1, max_size=60), st.integers(0, 2**32 - 1))
def test_configuration_preserves_degrees(d, seed):
    d = np.array(d)
    d[0] += d.sum() % 2
    G = configuration_multigraph(d, np.random.default_rng(seed))
    deg = np.bincount(G.u, minlength=len(d)) + np.bincount(G.v, minlength=len(d))
    assert np.array_equal(deg, d)
    assert G.edges == d.sum() // 2
