"""Two-phase exact simplex over gmpy2 rationals.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` with sparse dict rows.  Pricing is
Dantzig's largest reduced cost until a run of ``bland_after`` consecutive
degenerate pivots is seen; from then on Bland's smallest-index rule is used
for both entering and leaving choices, which rules out cycling.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = mpq(0)


@dataclass
class LPOutcome:
    status: str
    value: mpq | None = None
    x: list | None = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows, rhs, basis, bland_after):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.bland_after = bland_after
        self.bland = False
        self.degenerate_run = 0
        self.pivots = 0

    def pivot(self, r, c, d):
        rows, rhs = self.rows, self.rhs
        prow = rows[r]
        a = prow[c]
        if a != 1:
            inv = 1 / a
            for k in prow:
                prow[k] *= inv
            rhs[r] *= inv
        br = rhs[r]
        items = list(prow.items())
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row.get(c)
            if f is None:
                continue
            for k, v in items:
                nv = row.get(k, _ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            rhs[i] -= f * br
        f = d.get(c)
        delta = _ZERO
        if f:
            for k, v in items:
                nv = d.get(k, _ZERO) - f * v
                if nv:
                    d[k] = nv
                else:
                    d.pop(k, None)
            delta = f * br
        self.basis[r] = c
        self.pivots += 1
        return delta

    def entering(self, d, limit):
        if self.bland:
            best = None
            for j, v in d.items():
                if j < limit and v > 0 and (best is None or j < best):
                    best = j
            return best
        best, bestv = None, _ZERO
        for j, v in d.items():
            if j < limit and (v > bestv or (v == bestv and v > 0 and j < best)):
                best, bestv = j, v
        return best

    def leaving(self, c):
        best_r, best_ratio = None, None
        for i, row in enumerate(self.rows):
            a = row.get(c)
            if a is None or a <= 0:
                continue
            ratio = self.rhs[i] / a
            if (best_r is None or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < self.basis[best_r])):
                best_r, best_ratio = i, ratio
        return best_r

    def optimize(self, d, z, limit):
        """Iterate until optimal; returns (status, objective)."""
        while True:
            c = self.entering(d, limit)
            if c is None:
                return OPTIMAL, z
            r = self.leaving(c)
            if r is None:
                return UNBOUNDED, z
            if self.rhs[r] == 0:
                self.degenerate_run += 1
                if self.degenerate_run >= self.bland_after:
                    self.bland = True
            else:
                self.degenerate_run = 0
            z += self.pivot(r, c, d)


def maximize(n, objective, rows, rhs, bland_after=50) -> LPOutcome:
    """Maximize ``sum objective[j] x_j`` subject to ``rows[i] . x <= rhs[i]``, ``x >= 0``.

    ``objective`` and each row are ``{column: mpq}`` dicts over ``range(n)``.
    """
    m = len(rows)
    slack0 = n
    art0 = n + m
    t_rows, t_rhs, basis = [], [], []
    art_rows = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        b = mpq(b)
        r = {j: mpq(v) for j, v in row.items() if v}
        r[slack0 + i] = mpq(1)
        if b < 0:
            r = {j: -v for j, v in r.items()}
            b = -b
            r[art0 + len(art_rows)] = mpq(1)
            basis.append(art0 + len(art_rows))
            art_rows.append(i)
        else:
            basis.append(slack0 + i)
        t_rows.append(r)
        t_rhs.append(b)
    tab = _Tableau(t_rows, t_rhs, basis, bland_after)

    if art_rows:
        d: dict = {}
        z = _ZERO
        for i in art_rows:
            for j, v in t_rows[i].items():
                if j < art0:
                    nv = d.get(j, _ZERO) + v
                    if nv:
                        d[j] = nv
                    else:
                        d.pop(j, None)
            z -= t_rhs[i]
        _, z = tab.optimize(d, z, art0)
        if z < 0:
            return LPOutcome(INFEASIBLE, pivots=tab.pivots)
        # drive remaining (zero-level) artificials out of the basis
        keep = []
        for i in range(len(tab.rows)):
            if tab.basis[i] >= art0:
                col = next((j for j in sorted(tab.rows[i]) if j < art0), None)
                if col is None:
                    continue
                tab.pivot(i, col, {})
            keep.append(i)
        tab.rows = [tab.rows[i] for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        for row in tab.rows:
            for j in [j for j in row if j >= art0]:
                del row[j]

    cost = {j: mpq(v) for j, v in objective.items() if v}
    d = dict(cost)
    z = _ZERO
    for i, bcol in enumerate(tab.basis):
        cb = cost.get(bcol)
        if not cb:
            continue
        z += cb * tab.rhs[i]
        for j, v in tab.rows[i].items():
            nv = d.get(j, _ZERO) - cb * v
            if nv:
                d[j] = nv
            else:
                d.pop(j, None)
    status, z = tab.optimize(d, z, art0)
    if status == UNBOUNDED:
        return LPOutcome(UNBOUNDED, pivots=tab.pivots)
    x = [_ZERO] * n
    for i, bcol in enumerate(tab.basis):
        if bcol < n:
            x[bcol] = tab.rhs[i]
    return LPOutcome(OPTIMAL, z, x, tab.pivots)
