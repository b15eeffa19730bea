"""Slow, obviously-correct reference implementations used only by the tests.

None of these share code with the package: cycles are found by transitive
closure, subsets by itertools, lifts and vertices by solving every square
subsystem with Fractions, and the XOR shuffle is replayed straight-line.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np


# ---------------------------------------------------------------- digraphs

def induced_has_cycle(arcs, subset):
    """Cycle test by Warshall closure on the induced subgraph."""
    nodes = list(subset)
    reach = {u: {v for v in arcs.get(u, ()) if v in subset} for u in nodes}
    for w in nodes:
        for u in nodes:
            if w in reach[u]:
                reach[u] |= reach[w]
    return any(u in reach[u] for u in nodes)


def all_acyclic_subsets(vertices, arcs):
    out = []
    for n in range(1, len(vertices) + 1):
        for combo in combinations(vertices, n):
            if not induced_has_cycle(arcs, set(combo)):
                out.append(frozenset(combo))
    return out


def brute_mais(vertices, arcs):
    subs = all_acyclic_subsets(vertices, arcs)
    return max((len(s) for s in subs), default=0)


# ---------------------------------------------------------------- linear algebra

def solve(mat, rhs):
    """Gaussian elimination over Fractions; None when singular."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return None
        a[c], a[p] = a[p], a[c]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def basic_points(rows, n):
    """Every point of {x >= 0 : rows} that is a basic solution.

    ``rows`` is a list of (coefficient list, rhs).  Because x >= 0 makes the
    set pointed, it is nonempty iff this list is nonempty.
    """
    cons = [(list(map(Fraction, c)), Fraction(b)) for c, b in rows]
    cons += [([Fraction(-1 if i == j else 0) for j in range(n)], Fraction(0)) for i in range(n)]
    if n == 0:
        return [()] if all(b >= 0 for _, b in cons) else []
    pts = set()
    for combo in combinations(cons, n):
        x = solve([c for c, _ in combo], [b for _, b in combo])
        if x is None:
            continue
        if all(sum(ci * xi for ci, xi in zip(c, x)) <= b for c, b in cons):
            pts.add(tuple(x))
    return sorted(pts)


def has_lift(rows, kept, victims, point):
    """Search all candidate lifts: basic solutions of the system in the
    eliminated variables once the kept ones are fixed to ``point``."""
    reduced = []
    for coeffs, b in rows:
        b = Fraction(b) - sum(Fraction(coeffs.get(v, 0)) * point[v] for v in kept)
        reduced.append(([coeffs.get(v, 0) for v in victims], b))
    return bool(basic_points(reduced, len(victims)))


def max_over_vertices(rows, variables, objective):
    pts = basic_points([([c.get(v, 0) for v in variables], b) for c, b in rows], len(variables))
    return max(sum(Fraction(objective.get(v, 0)) * x for v, x in zip(variables, p)) for p in pts)


# ---------------------------------------------------------------- shuffle replay

def replay_decode(K, g, L, transmissions, messages):
    """Independent receiver: rebuild each wanted segment by XORing the
    broadcast that carries it with every other segment in that broadcast,
    reading those from the true messages the receiver holds."""
    decoded = []
    for k in range(K):
        holds = [m for m in range(K) if (m - k) % g != 0]
        bits = []
        for u in range(1, g):
            sender = (k - u) % K
            word = [int(b) for b in transmissions[sender]]
            for i in range(1, g):
                if i == u:
                    continue
                src = (sender + i) % K
                assert src in holds, "replay needs a message outside side information"
                seg = messages[src][(i - 1) * L:i * L]
                word = [w ^ int(s) for w, s in zip(word, seg)]
            bits.extend(word)
        decoded.append(np.array(bits, dtype=np.uint8))
    return decoded
