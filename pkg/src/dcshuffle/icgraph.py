"""Side-information digraph and acyclic-subset machinery.

Vertex ``u`` has an arc to ``v`` when the receiver wanting ``u`` already holds
``v``.  The outer bound needs every acyclic induced subset, and the maximum
acyclic induced subgraph (MAIS) is reported for diagnostics.  Both searches
are exact; supersets of cyclic sets are never examined.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping

from .dc_model import ShuffleProblem
from .errors import BudgetExceeded, UnknownVertex


@dataclass(frozen=True)
class SideInfoDigraph:
    vertices: tuple
    arcs: Mapping[Hashable, frozenset]

    @classmethod
    def from_arcs(cls, vertices: Iterable, arcs: Iterable[tuple]) -> "SideInfoDigraph":
        """Arbitrary digraph (tests / external input). Self-loops are rejected."""
        verts = tuple(sorted(set(vertices)))
        adj = {v: set() for v in verts}
        for u, v in arcs:
            if u not in adj or v not in adj:
                raise UnknownVertex(f"arc ({u!r}, {v!r}) uses an unknown vertex")
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            adj[u].add(v)
        return cls(verts, {v: frozenset(s) for v, s in adj.items()})

    @property
    def arc_count(self):
        return sum(len(s) for s in self.arcs.values())

    def arc_list(self):
        order = {v: i for i, v in enumerate(self.vertices)}
        return sorted(((u, v) for u in self.vertices for v in self.arcs[u]),
                      key=lambda a: (order[a[0]], order[a[1]]))

    def to_adjacency_text(self):
        """One line per vertex: ``k,f: k1,f1 k2,f2 ...`` in vertex order."""
        order = {v: i for i, v in enumerate(self.vertices)}

        def fmt(v):
            return f"{v.node},{v.batch}" if hasattr(v, "node") else str(v)

        lines = []
        for u in self.vertices:
            succ = sorted(self.arcs[u], key=order.__getitem__)
            lines.append(f"{fmt(u)}: " + " ".join(fmt(v) for v in succ))
        return "\n".join(line.rstrip() for line in lines) + "\n"


def build_digraph(problem: ShuffleProblem) -> SideInfoDigraph:
    verts = tuple(sorted(problem.messages))
    vset = set(verts)
    arcs = {u: frozenset(v for v in problem.side_info[u.node] if v in vset and v != u)
            for u in verts}
    return SideInfoDigraph(verts, arcs)


def _induced_acyclic(arcs, subset) -> bool:
    # Kahn's algorithm restricted to ``subset``
    indeg = {v: 0 for v in subset}
    for u in subset:
        for v in arcs[u]:
            if v in indeg:
                indeg[v] += 1
    stack = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in arcs[u]:
            if v in indeg:
                indeg[v] -= 1
                if indeg[v] == 0:
                    stack.append(v)
    return seen == len(indeg)


def is_acyclic(graph: SideInfoDigraph, subset: Iterable) -> bool:
    subset = set(subset)
    unknown = [v for v in subset if v not in graph.arcs]
    if unknown:
        raise UnknownVertex(f"not vertices of the graph: {unknown!r}")
    return _induced_acyclic(graph.arcs, subset)


def _closes_cycle(arcs, members: set, v) -> bool:
    """True if adding ``v`` to the acyclic set ``members`` creates a cycle."""
    preds = {w for w in members if v in arcs[w]}
    if not preds:
        return False
    frontier = [u for u in arcs[v] if u in members]
    seen = set(frontier)
    while frontier:
        u = frontier.pop()
        if u in preds:
            return True
        for w in arcs[u]:
            if w in members and w not in seen:
                seen.add(w)
                frontier.append(w)
    return False


def enumerate_acyclic_subsets(graph: SideInfoDigraph, max_vertices: int | None = None,
                              budget: int | None = None) -> Iterator[frozenset]:
    """Yield every nonempty acyclic vertex subset exactly once.

    Subsets come out by increasing size, lexicographically (in vertex order)
    within a size.  A candidate of size s+1 is only examined when all of its
    s-subsets were acyclic.  ``budget`` caps the number of examined candidates.
    """
    verts = graph.vertices
    n = len(verts)
    cap = n if max_vertices is None else min(n, max_vertices)
    examined = 0

    def spend():
        nonlocal examined
        examined += 1
        if budget is not None and examined > budget:
            raise BudgetExceeded(f"acyclic-subset enumeration exceeded budget of {budget} subsets")

    level = []
    for i in range(n if cap >= 1 else 0):
        spend()
        level.append((i,))
        yield frozenset((verts[i],))
    size = 1
    while level and size < cap:
        known = set(level)
        nxt = []
        for base in level:
            members = {verts[i] for i in base}
            for v in range(base[-1] + 1, n):
                cand = base + (v,)
                if any(cand[:p] + cand[p + 1:] not in known for p in range(size)):
                    continue
                spend()
                if not _closes_cycle(graph.arcs, members, verts[v]):
                    nxt.append(cand)
        for cand in nxt:
            yield frozenset(verts[i] for i in cand)
        level = nxt
        size += 1


def mais(graph: SideInfoDigraph, budget: int | None = None) -> tuple[int, frozenset]:
    """Maximum acyclic induced subgraph: ``(size, witness)``.

    Include-first branch and bound over the vertex order, so the first
    maximum found is the lexicographically least one.
    """
    verts = graph.vertices
    n = len(verts)
    arcs = graph.arcs
    best: list = []
    nodes = 0

    def rec(idx, cur, members):
        nonlocal best, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"MAIS search exceeded budget of {budget} nodes")
        if len(cur) > len(best):
            best = list(cur)
        if idx == n or len(cur) + (n - idx) <= len(best):
            return
        v = verts[idx]
        if not _closes_cycle(arcs, members, v):
            cur.append(v)
            members.add(v)
            rec(idx + 1, cur, members)
            cur.pop()
            members.discard(v)
        if len(cur) + (n - idx - 1) > len(best):
            rec(idx + 1, cur, members)

    rec(0, [], set())
    return len(best), frozenset(best)

