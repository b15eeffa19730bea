import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcshuffle import (DivisibilityError, MessageId, NonuniformCapacity, achievable,
                       build_scheme, derive_shuffle_problem, gen_family, rate_report, run)
from dcshuffle.capacity_check import family_parameters
from dcshuffle.inner_bound import family_gamma_filter
from dcshuffle.shuffle_sim import decode, draw_messages, encode

import oracles


def test_three_two_plan():
    s = build_scheme(3, 2, 4)
    assert s.plan == (((1, 1), (2, 2)), ((2, 1), (0, 2)), ((0, 1), (1, 2)))


def test_four_two_plan_is_uncoded():
    s = build_scheme(4, 2, 4)
    assert s.g == 2
    assert s.plan == tuple((((j + 1) % 4, 1),) for j in range(4))


def test_clique_plan():
    s = build_scheme(5, 4, 2)
    assert all(len(t) == 4 for t in s.plan)


def test_build_errors():
    with pytest.raises(DivisibilityError):
        build_scheme(5, 2, 8)
    with pytest.raises(ValueError):
        build_scheme(3, 2, 0)


@pytest.mark.parametrize("K, r", family_parameters(10))
def test_segment_coverage_and_holdings(K, r):
    s = build_scheme(K, r, 1)
    carried = [pair for terms in s.plan for pair in terms]
    assert sorted(carried) == sorted((m, i) for m in range(K) for i in range(1, s.g))
    p = derive_shuffle_problem(gen_family(K, r))
    for j, terms in enumerate(s.plan):
        held = {m.node for m in p.side_info[j]}
        assert all(m in held for m, _ in terms)
    assert (K - r) * (s.g - 1) == r


@pytest.mark.parametrize("K, r, L", [(3, 2, 8), (6, 4, 8), (3, 2, 1), (8, 6, 1)])
def test_run_decodes_exactly(K, r, L):
    t = run(build_scheme(K, r, L), 0)
    assert t.all_exact
    assert all(len(y) == L for y in t.transmissions)
    assert all(len(d) == len(m) == (t.scheme.g - 1) * L for d, m in zip(t.decoded, t.messages))


@given(st.sampled_from(family_parameters(8)), st.integers(1, 16), st.integers(0, 2 ** 32))
def test_replay_oracle_agrees(Kr, L, seed):
    K, r = Kr
    s = build_scheme(K, r, L)
    t = run(s, seed)
    replay = oracles.replay_decode(K, s.g, L, t.transmissions, t.messages)
    assert all(np.array_equal(a, m) for a, m in zip(replay, t.messages))
    assert all(np.array_equal(a, d) for a, d in zip(replay, t.decoded))


def test_run_is_pure_in_seed():
    s = build_scheme(6, 4, 8)
    assert json.dumps(run(s, 7).to_json()) == json.dumps(run(s, 7).to_json())
    assert run(s, 7).to_json()["messages"] != run(s, 8).to_json()["messages"]


def test_corrupted_broadcast_is_recorded_not_raised():
    s = build_scheme(3, 2, 8)
    msgs = draw_messages(s, 1)
    tx = encode(s, msgs)
    tx[0] = tx[0] ^ 1
    est = decode(s, 1, tx, {m: msgs[m] for m in s.side_info(1)})
    assert not np.array_equal(est, msgs[1])


@pytest.mark.parametrize("K, r, rate, tight", [(3, 2, 2, "R(0,0) <= 2"), (6, 4, 2, "R(0,0) + R(3,0) <= 4"),
                                               (6, 3, 1, "R(0,0) + R(2,0) + R(4,0) <= 3")])
def test_rate_report_examples(K, r, rate, tight):
    rep = rate_report(build_scheme(K, r, 8), 1)
    assert rep.rates == (rate,) * K
    assert rep.in_outer_region and rep.binds_group_bounds
    assert rep.blocklength == 8


def test_rate_report_scales_with_capacity():
    rep = rate_report(build_scheme(6, 4, 3), Fraction(1, 2))
    assert rep.rates == (Fraction(1),) * 6 and rep.blocklength == 6
    assert rate_report(build_scheme(6, 4, 3), ["1/2"] * 6).rates == rep.rates


def test_rate_report_rejects_nonuniform():
    with pytest.raises(NonuniformCapacity):
        rate_report(build_scheme(3, 2, 8), [1, 2, 1])
    with pytest.raises(NonuniformCapacity):
        rate_report(build_scheme(3, 2, 8), 0)


@pytest.mark.parametrize("K, r", family_parameters(8))
def test_achieved_tuple_is_certified(K, r):
    p = derive_shuffle_problem(gen_family(K, r))
    g = K // (K - r)
    cert = achievable(p, {MessageId(k, k % g): g - 1 for k in range(K)},
                      gamma_filter=family_gamma_filter(K, r))
    gammas = [v for k, v in cert.values.items() if k.kind == "composite"]
    assert gammas == [1] * K


def test_transcript_json():
    doc = run(build_scheme(3, 2, 4), 5).to_json()
    assert doc["seed"] == 5 and doc["scheme"]["K"] == 3
    assert all(len(h) == 2 for h in doc["transmissions"])
    assert doc["exact"] == [True, True, True]
