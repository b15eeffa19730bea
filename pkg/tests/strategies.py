"""Hypothesis strategies shared by several test modules."""
from hypothesis import strategies as st

from dcshuffle import DcInstance


@st.composite
def instances(draw, max_K=4, max_F=3, caps=("0", "1/2", "1", "2")):
    K = draw(st.integers(2, max_K))
    F = draw(st.integers(1, max_F))
    maps = draw(st.lists(st.frozensets(st.integers(0, F - 1)), min_size=K, max_size=K)
                .filter(lambda ms: frozenset().union(*ms) == frozenset(range(F))))
    capacities = draw(st.lists(st.sampled_from(caps), min_size=K, max_size=K))
    return DcInstance(K, F, K, F, tuple(maps), tuple(frozenset({k}) for k in range(K)),
                      tuple(capacities))
