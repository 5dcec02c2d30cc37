import itertools
import math

import mpmath
import pytest

from sgraph.chareq import solve_char_eq
from sgraph.degree_set import parse_degree_set as P
from sgraph.genfun import psi
from sgraph.sim.partition import PartitionError, multigraph_partition_series


def mp_series(S, n, nu, N_max):
    """Z* = sum_N (2N-1)!! nu^N #{degree sequences in S^n with total 2N} / prod d_i!."""
    mpmath.mp.dps = 40
    members = [k for k in S.members(2 * N_max)]
    # coefficient extraction via polynomial power in exact rationals
    poly = [mpmath.mpf(0)] * (2 * N_max + 1)
    for k in members:
        poly[k] = 1 / mpmath.factorial(k)
    out = [mpmath.mpf(1)] + [mpmath.mpf(0)] * (2 * N_max)
    for _ in range(n):
        new = [mpmath.mpf(0)] * (2 * N_max + 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(poly[: 2 * N_max + 1 - i]):
                    if b:
                        new[i + j] += a * b
        out = new
    Z = mpmath.mpf(0)
    for N in range(N_max + 1):
        Z += mpmath.fac2(2 * N - 1) * mpmath.mpf(nu) ** N * out[2 * N]
    return Z


def test_trivial_and_single_edge():
    assert multigraph_partition_series(P("set:0", allow_trivial=True), 7, 0.3).log_Z_star == 0.0
    assert math.exp(multigraph_partition_series(P("set:1"), 2, 0.4).log_Z_star) == \
        pytest.approx(0.4, rel=1e-12)


def test_unconstrained_two_vertices():
    # Z* = sum_N (2N-1)!! nu^N 2^{2N}/(2N)! = exp(2 nu)
    r = multigraph_partition_series(P("ge:0"), 2, 0.3)
    assert r.log_Z_star == pytest.approx(0.6, rel=1e-10)


@pytest.mark.parametrize("spec,n,nu", [("even", 6, 0.4), ("set:0,3", 5, 0.2), ("ge:1", 4, 0.5)])
def test_against_mpmath(spec, n, nu):
    S = P(spec)
    r = multigraph_partition_series(S, n, nu)
    ref = mp_series(S, n, nu, 40)
    assert r.log_Z_star == pytest.approx(float(mpmath.log(ref)), rel=1e-9)
    assert r.tail_estimate <= 1e-10


def test_limit_approach():
    S = P("even")
    target = psi(S, solve_char_eq(S, 2.0).mu_star)
    errs = [abs(multigraph_partition_series(S, n, 2.0 / n).per_vertex - target)
            for n in (20, 40, 80, 160)]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.01


def test_fixed_cutoff_too_small():
    with pytest.raises(PartitionError):
        multigraph_partition_series(P("ge:0"), 30, 0.2, N_cutoff=2)


def test_bad_arguments():
    with pytest.raises(ValueError):
        multigraph_partition_series(P("even"), 10, 0.0)
    with pytest.raises(ValueError):
        multigraph_partition_series(P("even"), 0, 0.1)
