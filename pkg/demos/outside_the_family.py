"""A small irregular instance where the two bounds do not meet.

Four nodes, three batches, mixed capacities.  The outer bound has a vertex
that no decoding choice of composite coding reaches, so the checker reports
a GAP together with that vertex.  This is a statement about the two bounds,
not about the true capacity region.
"""
from fractions import Fraction

from dcshuffle import DcInstance, check_capacity, derive_shuffle_problem
from dcshuffle.outer_bound import describe

instance = DcInstance(
    K=4, N=3, Q=4, F=3,
    map_assignment=({0, 1}, {1, 2}, {2}, set()),
    reduce_assignment=({0}, {1}, {2}, {3}),
    capacities=(1, 1, Fraction(1, 2), 1),
)
problem = derive_shuffle_problem(instance)
verdict = check_capacity(problem, "maximal")

print("outer region:")
print(describe(verdict.outer), end="")
print("\nverdict:", verdict.status, f"({verdict.side})")
for label, value in sorted(verdict.witness.items()):
    print(f"  {label} = {value}")
