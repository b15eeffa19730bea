"""Six nodes with computation load 4.

Nodes k and k+3 map the same two batches, so they hold the same side
information and neither can help the other.  The MAIS is the pair
{k, k+3}, and each pair shares four units of link capacity.  Composite
coding closes the gap; this script prints both regions, their vertices
and a certificate for the symmetric corner.
"""
from pathlib import Path

from dcshuffle import (DcInstance, achievable, build_digraph, check_capacity,
                       derive_shuffle_problem, mais, acyclic_outer_region, vertices)
from dcshuffle.inner_bound import family_gamma_filter
from dcshuffle.outer_bound import describe

data = Path(__file__).with_name("data") / "ex2.json"
problem = derive_shuffle_problem(DcInstance.from_json(data.read_text()))

size, witness = mais(build_digraph(problem))
print("MAIS", size, sorted(str(m) for m in witness))

outer = acyclic_outer_region(problem)
print("\nouter region:")
print(describe(outer), end="")
print(len(vertices(outer)), "vertices")

verdict = check_capacity(problem)
print("\nverdict:", verdict.status)
print("outer vertices needing an LP certificate:", len(verdict.certificates))

# Restricting to the composites the XOR scheme uses still reaches the corner.
cert = achievable(problem, {m: 2 for m in problem.messages},
                  gamma_filter=family_gamma_filter(6, 4))
print("\npair composites at R = (2,...,2):")
for label, value in sorted(cert.values.items(), key=lambda kv: kv[0].sort_key()):
    if label.kind == "composite":
        print(f"  {label} = {value}")
