import pytest
from hypothesis import given
from hypothesis import strategies as st

from sgraph.degree_set import DegreeSet, DegreeSetError, admissible_n, parse_degree_set


@pytest.mark.parametrize("spec,first", [
    ("even", [0, 2, 4, 6]),
    ("odd", [1, 3, 5, 7]),
    ("ge:1", [1, 2, 3, 4]),
    ("set:3,0", [0, 3]),
    ("pow2:64", [1, 2, 4, 8]),
    ("even|cut:4", [0, 2, 4]),
])
def test_members(spec, first):
    S = parse_degree_set(spec)
    assert S.members(8)[: len(first)].tolist() == first


def test_pow2_canonical_cutoff():
    S = parse_degree_set("pow2:100")
    assert S.cutoff == 64 and S.max_element == 64 and S.label == "pow2:64"
    assert 64 in S and 128 not in S and 3 not in S


@pytest.mark.parametrize("spec", ["", "foo", "set:", "set:a", "ge:-1", "pow2", "pow2:0",
                                  "even|cap:3", "set:-2,1", "odd:3"])
def test_malformed(spec):
    with pytest.raises(DegreeSetError):
        parse_degree_set(spec)


def test_trivial_set_needs_opt_in():
    with pytest.raises(DegreeSetError):
        parse_degree_set("set:0")
    assert parse_degree_set("set:0", allow_trivial=True).is_trivial


def test_structural_queries():
    assert parse_degree_set("odd").all_odd
    assert parse_degree_set("set:1,3").all_odd
    assert not parse_degree_set("set:0,1").all_odd
    assert parse_degree_set("even").parity_class == 0
    assert parse_degree_set("ge:2").size is None
    assert parse_degree_set("set:0,3").size == 2
    assert parse_degree_set("ge:3").min_element == 3


def test_shift_down():
    assert parse_degree_set("set:0,1,4").shifted_down().members(10).tolist() == [0, 3]
    assert parse_degree_set("even").shifted_down().members(6).tolist() == [1, 3, 5]
    assert parse_degree_set("ge:0").shifted_down().members(3).tolist() == [0, 1, 2, 3]


def test_admissible_n():
    odd = parse_degree_set("odd")
    assert not admissible_n(odd, 5)
    assert admissible_n(odd, 6)
    assert admissible_n(parse_degree_set("set:0,1"), 5)
    assert admissible_n(odd, 0)


def test_direct_construction_checks():
    with pytest.raises(DegreeSetError):
        DegreeSet("explicit", elements=(3, 1))
    with pytest.raises(DegreeSetError):
        DegreeSet("pow2")


@given(st.sets(st.integers(0, 30), min_size=1, max_size=8))
def test_explicit_roundtrip(els):
    if els == {0}:
        return
    S = parse_degree_set("set:" + ",".join(map(str, els)))
    assert set(S.members(40).tolist()) == els
    assert parse_degree_set(S.label) == S
    assert all((k in S) == (k in els) for k in range(35))
