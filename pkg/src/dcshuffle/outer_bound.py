"""Acyclic-subset outer bound on the shuffle rate region.

For every acyclic induced vertex set S of the side-information digraph, the
sum of the rates in S is at most the total capacity of the senders holding
at least one message of S.
"""
from __future__ import annotations

from fractions import Fraction

from .dc_model import MessageId, ShuffleProblem, family_groups
from .icgraph import SideInfoDigraph, build_digraph, enumerate_acyclic_subsets
from .polytope import HPolytope, LinearInequality, VarLabel, remove_redundant
from .rational import as_fraction


def rate_variables(problem: ShuffleProblem):
    return tuple(VarLabel.rate(m) for m in sorted(problem.messages))


def acyclic_subset_bounds(problem: ShuffleProblem, graph: SideInfoDigraph | None = None,
                          budget: int | None = None) -> list[tuple[frozenset, Fraction]]:
    """``(S, capacity bound)`` for every acyclic S, before any filtering."""
    if graph is None:
        graph = build_digraph(problem)
    out = []
    for s in enumerate_acyclic_subsets(graph, budget=budget):
        bound = sum((problem.capacities[j] for j, side in enumerate(problem.side_info)
                     if s & side), Fraction(0))
        out.append((s, bound))
    return out


def _drop_dominated(bounds):
    # S' is implied by any S ⊇ S' with bound(S) <= bound(S'), since rates are >= 0.
    by_size = sorted(bounds, key=lambda sb: -len(sb[0]))
    kept = []
    for s, b in by_size:
        if any(s <= t and bt <= b for t, bt in kept):
            continue
        kept.append((s, b))
    return kept


def acyclic_outer_region(problem: ShuffleProblem, graph: SideInfoDigraph | None = None,
                 budget: int | None = None) -> HPolytope:
    variables = rate_variables(problem)
    bounds = _drop_dominated(acyclic_subset_bounds(problem, graph, budget))
    rows = [LinearInequality.make({VarLabel.rate(m): 1 for m in s}, b) for s, b in bounds]
    return remove_redundant(HPolytope(variables, tuple(rows)))


# name used by the original interface contract
prop1_region = acyclic_outer_region


def family_outer_region(K: int, r: int, capacities) -> HPolytope:
    """Closed-form outer region of the cyclic family ``gen_family(K, r)``.

    For each residue class G = {(k + i g) mod K} the group rate sum is bounded
    by the capacity of the senders outside G.
    """
    g, groups = family_groups(K, r)
    if isinstance(capacities, (list, tuple)):
        caps = [as_fraction(c) for c in capacities]
    else:
        caps = [as_fraction(capacities)] * K
    if len(caps) != K:
        raise ValueError(f"expected {K} capacities")
    label = lambda k: VarLabel.rate(MessageId(k, k % g))  # noqa: E731
    rows = []
    for grp in groups:
        bound = sum((caps[j] for j in range(K) if j not in grp), Fraction(0))
        rows.append(LinearInequality.make({label(k): 1 for k in grp}, bound))
    variables = tuple(label(k) for k in range(K))
    return HPolytope(variables, tuple(rows)).canonical()


def describe(region: HPolytope) -> str:
    """Human-readable listing, one inequality per line plus nonnegativity."""
    if not region.variables:
        return "(no messages to shuffle)\n"
    lines = [str(q) for q in region.canonical().inequalities]
    if region.variables:
        lines.append(", ".join(str(v) for v in sorted(region.variables)) + " >= 0")
    return "\n".join(lines) + "\n"
