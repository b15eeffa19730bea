from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcshuffle import (DcInstance, DivisibilityError, InvalidInstance, MessageId,
                       computation_load, derive_shuffle_problem, gen_family,
                       relabel_instance, validate)

from strategies import instances

M = MessageId


def example1():
    return DcInstance(3, 6, 3, 3,
                      (frozenset({1, 2}), frozenset({0, 2}), frozenset({0, 1})),
                      (frozenset({0}), frozenset({1}), frozenset({2})), (1, 1, 1))


def test_example1_instance_is_valid():
    assert validate(example1()) == []


def test_gen_family_reproduces_example1():
    assert gen_family(3, 2, 2, 3, capacities=1) == example1()


def test_overlapping_reduce_sets_are_reported():
    inst = DcInstance(2, 2, 2, 2, (frozenset({0}), frozenset({1})),
                      (frozenset({0}), frozenset({0})), (1, 1))
    msgs = [v.message for v in validate(inst)]
    assert any("reduce assignment not disjoint" in m for m in msgs)


def test_unmapped_batch_is_reported():
    inst = DcInstance(2, 3, 2, 3, (frozenset({0}), frozenset({1})),
                      (frozenset({0}), frozenset({1})), (1, 1))
    assert any("unmapped batch" in v.message for v in validate(inst))


@pytest.mark.parametrize("inst, code", [
    (DcInstance(2, 3, 2, 2, (frozenset({0}), frozenset({1})), (frozenset({0}), frozenset({1})), (1, 1)),
     "F_NOT_DIVIDES_N"),
    (DcInstance(2, 2, 3, 2, (frozenset({0}), frozenset({1})), (frozenset({0}), frozenset({1, 2})), (1, 1)),
     "K_NOT_DIVIDES_Q"),
    (DcInstance(2, 2, 2, 2, (frozenset({0}), frozenset({1})), (frozenset({0}), frozenset({1})), (1, -1)),
     "NEGATIVE_CAPACITY"),
    (DcInstance(2, 2, 2, 2, (frozenset({0, 5}), frozenset({1})), (frozenset({0}), frozenset({1})), (1, 1)),
     "MAP_OUT_OF_RANGE"),
])
def test_violation_codes(inst, code):
    assert code in {v.code for v in validate(inst)}


def test_computation_load_examples():
    assert computation_load(example1()) == 2
    assert computation_load(gen_family(6, 4)) == 4
    full = DcInstance(3, 2, 3, 2, (frozenset({0, 1}),) * 3,
                      tuple(frozenset({k}) for k in range(3)), (1, 1, 1))
    assert computation_load(full) == 3


def test_example1_shuffle_problem():
    p = derive_shuffle_problem(example1())
    assert p.messages == (M(0, 0), M(1, 1), M(2, 2))
    assert p.side_info == (frozenset({M(1, 1), M(2, 2)}), frozenset({M(0, 0), M(2, 2)}),
                           frozenset({M(0, 0), M(1, 1)}))


def test_example2_side_information():
    p = derive_shuffle_problem(gen_family(6, 4, 2, 6))
    assert p.M == 6
    assert {m.node for m in p.side_info[0]} == {1, 2, 4, 5}
    for k in range(6):
        assert {m.node for m in p.side_info[k]} == set(range(6)) - {k, (k + 3) % 6}


def test_clique_family():
    p = derive_shuffle_problem(gen_family(4, 3, 1, 4))
    for k in range(4):
        assert {m.node for m in p.side_info[k]} == set(range(4)) - {k}


def test_nothing_to_shuffle():
    full = DcInstance(2, 2, 2, 2, (frozenset({0, 1}),) * 2, (frozenset({0}), frozenset({1})), (1, 1))
    assert derive_shuffle_problem(full).messages == ()


def test_divisibility_errors():
    with pytest.raises(DivisibilityError, match="K−r must divide K"):
        gen_family(5, 2)
    with pytest.raises(DivisibilityError):
        gen_family(4, 2, Q=6)


def test_invalid_instance_is_rejected_before_deriving():
    inst = DcInstance(2, 3, 2, 3, (frozenset({0}), frozenset({1})),
                      (frozenset({0}), frozenset({1})), (1, 1))
    with pytest.raises(InvalidInstance):
        derive_shuffle_problem(inst)


def test_json_round_trip_is_exact():
    inst = gen_family(6, 3, capacities=["1/3", "2", "0", "5/7", "1", "1/2"])
    doc = inst.to_json()
    assert doc["capacities"][0] == "1/3" and doc["capacities"][1] == "2/1"
    assert DcInstance.from_json(doc) == inst


def test_malformed_json_is_a_parse_violation():
    with pytest.raises(InvalidInstance) as exc:
        DcInstance.from_json({"K": 2})
    assert exc.value.violations[0].code == "PARSE"


def test_message_bits_scale_with_eta2():
    inst = gen_family(4, 2, eta1=3, Q=8, iv_bits=5)
    assert inst.message_bits == Fraction(3) * 2 * 5


@given(instances())
def test_message_count_identity(inst):
    p = derive_shuffle_problem(inst)
    assert p.M == inst.F * (inst.K - computation_load(inst))


@given(instances())
def test_side_information_is_consistent(inst):
    p = derive_shuffle_problem(inst)
    for j, side in enumerate(p.side_info):
        for m in side:
            assert m.batch in inst.map_assignment[j]
            assert m.batch not in inst.map_assignment[m.node]
            assert m.node != j
    for m in p.messages:
        assert m not in p.side_info[m.node]
        assert p.holders(m)


@given(instances(), st.randoms(use_true_random=False))
def test_load_invariant_under_relabeling(inst, rnd):
    perm = list(range(inst.K))
    rnd.shuffle(perm)
    assert computation_load(relabel_instance(inst, perm)) == computation_load(inst)


@given(st.integers(2, 12).flatmap(
    lambda K: st.tuples(st.just(K), st.sampled_from([r for r in range(1, K) if K % (K - r) == 0]))))
def test_family_structure(Kr):
    K, r = Kr
    inst = gen_family(K, r)
    assert validate(inst) == []
    assert computation_load(inst) == r
    p = derive_shuffle_problem(inst)
    g = K // (K - r)
    assert p.messages == tuple(M(k, k % g) for k in range(K))
    for k in range(K):
        expected = set(range(K)) - {(k + i * g) % K for i in range(K - r)}
        assert {m.node for m in p.side_info[k]} == expected
