from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcshuffle import (DcInstance, DivisibilityError, derive_shuffle_problem, gen_family,
                       acyclic_outer_region, vertices)
from dcshuffle.capacity_check import family_parameters
from dcshuffle.outer_bound import describe, family_outer_region
from dcshuffle.polytope import region_contains

from conftest import R
from strategies import instances


def test_example1(ex1):
    assert acyclic_outer_region(ex1).canonical_text() == "R(0,0) <= 2\nR(1,1) <= 2\nR(2,2) <= 2\n"


def test_example2(ex2):
    text = acyclic_outer_region(ex2).canonical_text()
    assert text == "R(0,0) + R(3,0) <= 4\nR(1,1) + R(4,1) <= 4\nR(2,2) + R(5,2) <= 4\n"


def test_four_two_family():
    p = derive_shuffle_problem(gen_family(4, 2))
    assert acyclic_outer_region(p).canonical_text() == "R(0,0) + R(2,0) <= 2\nR(1,1) + R(3,1) <= 2\n"


def test_closed_form_examples():
    assert family_outer_region(3, 2, 1).canonical_text() == "R(0,0) <= 2\nR(1,1) <= 2\nR(2,2) <= 2\n"
    assert family_outer_region(6, 3, 1).canonical_text() == (
        "R(0,0) + R(2,0) + R(4,0) <= 3\nR(1,1) + R(3,1) + R(5,1) <= 3\n")
    with pytest.raises(DivisibilityError):
        family_outer_region(5, 2, 1)


@pytest.mark.parametrize("K, r", family_parameters(10))
def test_acyclic_bound_equals_closed_form(K, r):
    p = derive_shuffle_problem(gen_family(K, r))
    assert acyclic_outer_region(p).canonical_text() == family_outer_region(K, r, 1).canonical_text()


def test_nonuniform_closed_form():
    caps = ["1", "2", "0", "1/2", "3", "1"]
    p = derive_shuffle_problem(gen_family(6, 4, capacities=caps))
    assert acyclic_outer_region(p) == family_outer_region(6, 4, caps)


def test_describe_lists_nonnegativity(ex1):
    assert describe(acyclic_outer_region(ex1)).endswith("R(0,0), R(1,1), R(2,2) >= 0\n")


def _with_caps(inst, caps):
    return DcInstance(inst.K, inst.N, inst.Q, inst.F, inst.map_assignment,
                      inst.reduce_assignment, tuple(caps))


@given(instances())
def test_zero_capacity_collapses_to_origin(inst):
    p = derive_shuffle_problem(_with_caps(inst, [0] * inst.K))
    assert vertices(acyclic_outer_region(p)) == [{R(m.node, m.batch): 0 for m in p.messages}]


@given(instances(), st.data())
def test_more_capacity_never_shrinks(inst, data):
    j = data.draw(st.integers(0, inst.K - 1))
    bigger = list(inst.capacities)
    bigger[j] += data.draw(st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3)]))
    small = acyclic_outer_region(derive_shuffle_problem(inst))
    large = acyclic_outer_region(derive_shuffle_problem(_with_caps(inst, bigger)))
    if small.dim <= 8:
        assert region_contains(large, small)


@given(instances(), st.sampled_from([Fraction(1, 2), Fraction(2), Fraction(5, 3)]))
def test_scaling_capacities_scales_vertices(inst, lam):
    base = acyclic_outer_region(derive_shuffle_problem(inst))
    scaled = acyclic_outer_region(derive_shuffle_problem(_with_caps(inst, [c * lam for c in inst.capacities])))
    if base.dim <= 8:
        expected = sorted(tuple(sorted((k, v * lam) for k, v in p.items())) for p in vertices(base))
        got = sorted(tuple(sorted(p.items())) for p in vertices(scaled))
        assert got == expected


def test_contract_alias():
    from dcshuffle import prop1_region
    assert prop1_region is acyclic_outer_region
