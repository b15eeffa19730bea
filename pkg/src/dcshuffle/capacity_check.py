"""Decide whether the composite-coding inner bound meets the acyclic outer bound.

A MATCH needs two facts.  First, every vertex of the outer region has an
exact LP certificate in the composite system.  Second, every inner piece
lies inside the outer region.  The composite region is closed under
lowering any single rate, so an outer vertex that is componentwise below an
already certified vertex is certified too.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .dc_model import ShuffleProblem, derive_shuffle_problem, family_groups, gen_family
from .errors import BlowupBudgetExceeded, BudgetExceeded, DimensionCapExceeded
from .icgraph import build_digraph, mais
from .inner_bound import (certify_choice, composite_region, decoding_strategies,
                          exhaustive_size, inner_max_point)
from .outer_bound import family_outer_region, acyclic_outer_region
from .polytope import HPolytope, feasible, region_contains, same_region, vertices
from .rational import as_fraction, format_rational

MATCH = "MATCH"
GAP = "GAP"
UNDECIDED = "UNDECIDED"


def _point_json(point):
    return {str(k): format_rational(v) for k, v in sorted(point.items(), key=lambda kv: kv[0].sort_key())}


@dataclass
class Verdict:
    status: str
    outer: HPolytope | None = None
    inner: list = field(default_factory=list)
    witness: dict | None = None
    side: str | None = None
    bug: bool = False
    reason: str = ""
    mais_size: int | None = None
    mais_witness: frozenset | None = None
    certificates: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_json(self, timings=False):
        doc = {
            "verdict": self.status,
            "side": self.side,
            "implementation_bug": self.bug,
            "reason": self.reason,
            "mais": self.mais_size,
            "mais_witness": [str(m) for m in sorted(self.mais_witness or ())],
            "outer": self.outer.to_json() if self.outer is not None else None,
            "inner": [{"choice": name, "region": reg.to_json() if reg is not None else None,
                       "method": "fme" if reg is not None else "lp"}
                      for name, reg in self.inner],
            "witnesses": [_point_json(self.witness)] if self.witness is not None else [],
            "certificates": [c.to_json() for c in self.certificates],
        }
        if timings:
            doc["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return doc


def _dominated(v, certified):
    return any(all(v[k] <= w[k] for k in v) for w in certified)


def check_capacity(problem: ShuffleProblem, strategy: str = "default", *,
                   fme_max_rows: int = 20000, side_cap: int = 4, choice_cap: int = 4096,
                   subset_budget: int | None = None, max_dim: int = 12) -> Verdict:
    timings = {}
    t0 = time.perf_counter()
    try:
        graph = build_digraph(problem)
        size, witness = mais(graph, budget=subset_budget)
        outer = acyclic_outer_region(problem, graph, budget=subset_budget)
    except BudgetExceeded as exc:
        return Verdict(UNDECIDED, reason=f"outer bound: {exc}")
    timings["outer"] = time.perf_counter() - t0
    verdict = Verdict(UNDECIDED, outer=outer, mais_size=size, mais_witness=witness, timings=timings)

    choices = list(decoding_strategies(problem, strategy, side_cap=side_cap, choice_cap=choice_cap))
    truncated = False
    if strategy == "exhaustive":
        largest, total = exhaustive_size(problem)
        truncated = largest > side_cap or total > choice_cap

    # (a) every outer vertex achievable
    t0 = time.perf_counter()
    try:
        outer_vertices = vertices(outer, max_dim=max_dim)
    except DimensionCapExceeded as exc:
        verdict.reason = f"outer vertices: {exc}"
        return verdict
    certified = []
    for v in sorted(outer_vertices, key=lambda p: (-sum(p.values()), sorted(p.items()))):
        if _dominated(v, certified):
            continue
        cert = None
        for name, choice in choices:
            cert = certify_choice(problem, v, name, choice)
            if cert is not None:
                break
        if cert is None:
            timings["achievability"] = time.perf_counter() - t0
            if truncated:
                verdict.reason = "outer vertex not achieved; exhaustive strategy was capped"
                verdict.witness = v
                return verdict
            verdict.status, verdict.side, verdict.witness = GAP, "outer-vertex-unachievable", v
            verdict.reason = f"no decoding choice under strategy {strategy!r} achieves this outer vertex"
            return verdict
        certified.append(v)
        verdict.certificates.append(cert)
    timings["achievability"] = time.perf_counter() - t0

    # (b) inner pieces inside the outer region
    t0 = time.perf_counter()
    for name, choice in choices:
        try:
            region = composite_region(problem, choice, max_rows=fme_max_rows)
        except BlowupBudgetExceeded:
            region = None
        verdict.inner.append((name, region))
        if region is not None:
            if any(same_region(region, other) for n, other in verdict.inner[:-1] if other is not None):
                verdict.inner.pop()
                continue
            res = region_contains(outer, region, max_dim=max_dim)
            bad = None if res.contained else res.witness
        else:
            bad = None
            for q in outer.inequalities:
                value, point = inner_max_point(problem, choice, q.as_dict())
                if value is None or value > q.rhs:
                    bad = point or {}
                    break
        if bad is not None:
            timings["containment"] = time.perf_counter() - t0
            verdict.status, verdict.side, verdict.witness, verdict.bug = (
                GAP, "inner-outside-outer", bad, True)
            verdict.reason = f"inner piece {name!r} leaves the outer region: implementation bug"
            return verdict
    timings["containment"] = time.perf_counter() - t0
    verdict.status = MATCH
    return verdict


@dataclass
class FamilyRow:
    K: int
    r: int
    g: int
    mais_size: int
    mais_ok: bool
    outer_closed_form: bool
    symmetric_binds: bool | None
    verdict: Verdict

    @property
    def ok(self):
        return (self.mais_ok and self.outer_closed_form and self.verdict.status == MATCH
                and self.symmetric_binds is not False)

    def to_json(self, timings=False):
        doc = {"K": self.K, "r": self.r, "g": self.g, "mais": self.mais_size,
               "mais_equals_K_minus_r": self.mais_ok,
               "outer_equals_closed_form": self.outer_closed_form,
               "symmetric_point_binds": self.symmetric_binds}
        doc.update({k: v for k, v in self.verdict.to_json(timings).items() if k != "mais"})
        return doc


def family_parameters(K_max: int, K_min: int = 2):
    return [(K, r) for K in range(K_min, K_max + 1) for r in range(1, K) if K % (K - r) == 0]


def symmetric_point_binds(outer: HPolytope, K: int, r: int, capacity) -> bool:
    """Whether R = (g-1)C in every coordinate lies in ``outer`` with each
    family group inequality tight."""
    g, groups = family_groups(K, r)
    c = as_fraction(capacity)
    point = {v: (g - 1) * c for v in outer.variables}
    if not feasible(outer, point):
        return False
    by_node = {v.message.node: v for v in outer.variables}
    bound = (K - (K - r)) * c
    return all(sum(point[by_node[k]] for k in grp) == bound for grp in groups)


def family_row(K: int, r: int, capacity=1, strategy: str = "default", **kwargs) -> FamilyRow:
    cap = as_fraction(capacity)
    inst = gen_family(K, r, capacities=cap)
    problem = derive_shuffle_problem(inst)
    g = K // (K - r)
    verdict = check_capacity(problem, strategy, **kwargs)
    mais_size = verdict.mais_size if verdict.mais_size is not None else -1
    closed = family_outer_region(K, r, cap)
    outer_ok = verdict.outer is not None and (
        verdict.outer.canonical_text() == closed.canonical_text()
        or same_region(verdict.outer, closed))
    binds = symmetric_point_binds(verdict.outer, K, r, cap) if verdict.outer is not None else None
    return FamilyRow(K, r, g, mais_size, mais_size == K - r, outer_ok, binds, verdict)


def _row_worker(args):
    K, r, capacity, strategy, kwargs = args
    return family_row(K, r, capacity, strategy, **kwargs)


def verify_family(K_max: int, capacity=1, strategy: str = "default", *, K_min: int = 2,
                  threads: int = 1, **kwargs) -> list[FamilyRow]:
    """Check every cyclic-family instance with ``K_min <= K <= K_max``.

    Rows are returned in (K, r) order regardless of ``threads``.
    """
    jobs = [(K, r, capacity, strategy, kwargs) for K, r in family_parameters(K_max, K_min)]
    if threads > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_row_worker, jobs))
    return [_row_worker(job) for job in jobs]

