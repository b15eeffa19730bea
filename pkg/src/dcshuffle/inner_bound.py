"""Distributed composite-coding inner bound.

Sender j owns a composite rate ``gamma{J}@j`` for every nonempty J within its
side information.  Each receiver first recovers the composite indices of
every other sender (link constraints), then each virtual receiver (k,f)
decodes a chosen message set D from sender j (polymatroid constraints on the
per-sender partial rates ``R(k,f)@j``), and a message's rate is split across
the senders holding it (rate-sum constraints).  Projecting out the composite
and partial rates gives the achievable region for one decoding choice; the
inner bound is the union over choices.

Strict inequalities are closed throughout: the capacity region is a closure.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, combinations, product
from typing import Callable, Iterator, Mapping

from . import simplex
from .dc_model import ShuffleProblem
from .errors import IncompleteChoice, StrategyExhausted
from .outer_bound import rate_variables
from .polytope import (FMEStats, HPolytope, LinearInequality, VarLabel, fme_eliminate,
                       remove_redundant)
from .rational import as_fraction, mpq_to_fraction, to_mpq

log = logging.getLogger(__name__)

GammaFilter = Callable[[frozenset, int], bool]


def _nonempty_subsets(items):
    items = sorted(items)
    return chain.from_iterable(combinations(items, n) for n in range(1, len(items) + 1))


@dataclass(frozen=True)
class DecodingChoice:
    """Per (wanted message, sender) pair, the messages decoded from that sender."""

    sets: tuple

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "DecodingChoice":
        items = []
        for (msg, j), d in mapping.items():
            d = frozenset(d)
            if msg not in d:
                raise ValueError(f"decoding set for {msg} at sender {j} must contain {msg}")
            items.append(((msg, j), d))
        return cls(tuple(sorted(items, key=lambda it: (it[0][0], it[0][1]))))

    def as_dict(self):
        return dict(self.sets)

    def to_json(self):
        return [{"message": str(m), "sender": j, "decode": [str(x) for x in sorted(d)]}
                for (m, j), d in self.sets]


def decoding_pairs(problem: ShuffleProblem):
    """All (virtual receiver, sender) pairs where the sender holds the wanted message."""
    return [(m, j) for m in sorted(problem.messages) for j in problem.holders(m)]


def default_choice(problem: ShuffleProblem) -> DecodingChoice:
    """Decode the wanted message plus the side information shared with the sender."""
    return DecodingChoice.from_mapping({
        (m, j): (frozenset({m}) | problem.shared(m.node, j)) & problem.side_info[j]
        for m, j in decoding_pairs(problem)})


def maximal_choice(problem: ShuffleProblem) -> DecodingChoice:
    return DecodingChoice.from_mapping({(m, j): problem.side_info[j]
                                        for m, j in decoding_pairs(problem)})


def exhaustive_size(problem: ShuffleProblem) -> tuple[int, int]:
    """(largest side-information set, number of global decoding choices)."""
    pairs = decoding_pairs(problem)
    largest = max((len(problem.side_info[j]) for _, j in pairs), default=0)
    total = 1
    for _, j in pairs:
        total *= 2 ** (len(problem.side_info[j]) - 1)
    return largest, total


def decoding_strategies(problem: ShuffleProblem, mode: str = "default", *,
                        side_cap: int = 4, choice_cap: int = 4096
                        ) -> Iterator[tuple[str, DecodingChoice]]:
    """Yield named decoding choices: ``default``; then ``maximal`` (modes
    maximal/exhaustive); then every remaining choice when ``mode`` is
    ``exhaustive`` and the instance is within ``side_cap``/``choice_cap``."""
    if mode not in ("default", "maximal", "exhaustive"):
        raise ValueError(f"unknown strategy {mode!r}")
    seen = set()
    first = default_choice(problem)
    seen.add(first)
    yield "default", first
    if mode == "default":
        return
    mx = maximal_choice(problem)
    if mx not in seen:
        seen.add(mx)
        yield "maximal", mx
    if mode != "exhaustive":
        return
    largest, total = exhaustive_size(problem)
    if largest > side_cap or total > choice_cap:
        log.warning("exhaustive decoding choices skipped: |S_j| max %d (cap %d), %d choices (cap %d)",
                    largest, side_cap, total, choice_cap)
        return
    pairs = decoding_pairs(problem)
    options = []
    for m, j in pairs:
        others = sorted(problem.side_info[j] - {m})
        options.append([frozenset((m,) + extra) for n in range(len(others) + 1)
                        for extra in combinations(others, n)])
    for i, combo in enumerate(product(*options)):
        ch = DecodingChoice.from_mapping(dict(zip(pairs, combo)))
        if ch not in seen:
            seen.add(ch)
            yield f"exhaustive-{i}", ch


def family_gamma_filter(K: int, r: int) -> GammaFilter:
    """Keep only the composite each sender uses in the cyclic XOR scheme:
    J = messages of nodes j+1, ..., j+g-1 (mod K)."""
    g = K // (K - r)

    def keep(J, j):
        return {m.node for m in J} == {(j + i) % K for i in range(1, g)}
    return keep


def composite_labels(problem: ShuffleProblem, j: int, gamma_filter: GammaFilter | None = None):
    out = []
    for J in _nonempty_subsets(problem.side_info[j]):
        J = frozenset(J)
        if gamma_filter is None or gamma_filter(J, j):
            out.append(VarLabel.composite(J, j))
    return out


def _receivers(problem):
    return sorted({m.node for m in problem.messages})


def link_constraints(problem: ShuffleProblem, gamma_filter: GammaFilter | None = None
                     ) -> list[LinearInequality]:
    """Every receiver must recover each composite index it does not already know."""
    rows = []
    for j in range(problem.K):
        labels = composite_labels(problem, j, gamma_filter)
        seen = set()
        for k in _receivers(problem):
            if k == j:
                continue
            known = problem.shared(k, j)
            lhs = frozenset(lab for lab in labels if not lab.subset <= known)
            if not lhs or lhs in seen:
                continue
            seen.add(lhs)
            rows.append(LinearInequality.make({lab: 1 for lab in lhs}, problem.capacities[j]))
    return rows


def polymatroid_constraints(problem: ShuffleProblem, choice: DecodingChoice,
                            gamma_filter: GammaFilter | None = None) -> list[LinearInequality]:
    sets = choice.as_dict()
    rows = []
    for m, j in decoding_pairs(problem):
        if (m, j) not in sets:
            raise IncompleteChoice(f"no decoding set for message {m} at sender {j}")
        side_j = problem.side_info[j]
        D = sets[(m, j)]
        if not D <= side_j or m not in D:
            raise IncompleteChoice(f"decoding set for {m} at sender {j} is not a subset of "
                                   "the sender's messages containing the wanted one")
        known = problem.shared(m.node, j)
        pool = D | known
        gammas = composite_labels(problem, j, gamma_filter)
        for T in _nonempty_subsets(D - known):
            T = frozenset(T)
            coeffs = {VarLabel.partial(t, j): Fraction(1) for t in T}
            for lab in gammas:
                if lab.subset <= pool and lab.subset & T:
                    coeffs[lab] = Fraction(-1)
            rows.append(LinearInequality.make(coeffs, 0))
    return rows


def rate_sum_constraints(problem: ShuffleProblem) -> list[LinearInequality]:
    rows = []
    for m in sorted(problem.messages):
        coeffs = {VarLabel.rate(m): Fraction(1)}
        for j in problem.holders(m):
            coeffs[VarLabel.partial(m, j)] = Fraction(-1)
        rows.append(LinearInequality.make(coeffs, 0))
    return rows


@dataclass(frozen=True)
class CompositeSystem:
    poly: HPolytope
    tags: tuple
    choice: DecodingChoice

    @property
    def rate_vars(self):
        return tuple(v for v in self.poly.variables if v.kind == "rate")

    @property
    def auxiliary_vars(self):
        return tuple(v for v in self.poly.variables if v.kind != "rate")


def composite_system(problem: ShuffleProblem, choice: DecodingChoice,
                     gamma_filter: GammaFilter | None = None) -> CompositeSystem:
    link = link_constraints(problem, gamma_filter)
    poly = polymatroid_constraints(problem, choice, gamma_filter)
    rsum = rate_sum_constraints(problem)
    variables = list(rate_variables(problem))
    for j in range(problem.K):
        variables += composite_labels(problem, j, gamma_filter)
    variables += [VarLabel.partial(m, j) for m, j in decoding_pairs(problem)]
    rows = link + poly + rsum
    tags = ("link",) * len(link) + ("polymatroid",) * len(poly) + ("rate-sum",) * len(rsum)
    return CompositeSystem(HPolytope(tuple(variables), tuple(rows)), tags, choice)


def composite_region(problem: ShuffleProblem, choice: DecodingChoice | None = None, *,
                     gamma_filter: GammaFilter | None = None, max_rows: int = 20000,
                     prune_threshold: int = 40, stats: FMEStats | None = None) -> HPolytope:
    """Achievable message-rate region for one decoding choice (exact projection)."""
    if choice is None:
        choice = default_choice(problem)
    system = composite_system(problem, choice, gamma_filter)
    partials = [v for v in system.auxiliary_vars if v.kind == "partial"]
    gammas = [v for v in system.auxiliary_vars if v.kind == "composite"]
    projected = fme_eliminate(system.poly, partials + gammas, max_rows=max_rows,
                              prune_threshold=prune_threshold, stats=stats)
    return remove_redundant(projected)


@dataclass
class InnerPiece:
    name: str
    choice: DecodingChoice
    region: HPolytope


@dataclass
class InnerRegion:
    pieces: list
    nonconvex_suspected: bool = False

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)


def inner_region(problem: ShuffleProblem, strategy: str = "default", **kwargs) -> InnerRegion:
    """Union of composite regions over the strategy's decoding choices.

    Pieces that repeat an earlier region are dropped.  The union is not
    convexified; ``nonconvex_suspected`` is set when no single piece
    contains all the others.
    """
    from .polytope import region_contains, same_region

    pieces: list[InnerPiece] = []
    strat_kwargs = {k: kwargs.pop(k) for k in ("side_cap", "choice_cap") if k in kwargs}
    for name, choice in decoding_strategies(problem, strategy, **strat_kwargs):
        region = composite_region(problem, choice, **kwargs)
        if any(same_region(region, p.region) for p in pieces):
            continue
        pieces.append(InnerPiece(name, choice, region))
    flag = False
    if len(pieces) > 1:
        flag = not any(all(region_contains(p.region, q.region) for q in pieces) for p in pieces)
    return InnerRegion(pieces, flag)


# ---------------------------------------------------------------- LP route

@dataclass
class Certificate:
    choice_name: str
    choice: DecodingChoice
    values: dict = field(default_factory=dict)

    def to_json(self):
        return {"choice": self.choice_name,
                "values": [[str(k), f"{v.numerator}/{v.denominator}"]
                           for k, v in sorted(self.values.items(), key=lambda kv: kv[0].sort_key())
                           if v]}


def _lp_over_system(system: CompositeSystem, fixed: Mapping, objective: Mapping):
    """Maximize ``objective`` over the auxiliary variables with rates fixed."""
    aux = [v for v in system.poly.variables if v not in fixed]
    idx = {v: i for i, v in enumerate(aux)}
    rows, rhs = [], []
    for q in system.poly.inequalities:
        row = {}
        b = to_mpq(q.rhs)
        for k, c in q.coeffs:
            if k in fixed:
                b -= to_mpq(c) * to_mpq(fixed[k])
            else:
                row[idx[k]] = to_mpq(c)
        if not row:
            if b < 0:
                return simplex.LPOutcome(simplex.INFEASIBLE), aux
            continue
        rows.append(row)
        rhs.append(b)
    cost = {idx[k]: to_mpq(c) for k, c in objective.items() if c}
    return simplex.maximize(len(aux), cost, rows, rhs), aux


def _verify(system: CompositeSystem, values: Mapping):
    for v in system.poly.variables:
        if values.get(v, 0) < 0:
            raise AssertionError(f"certificate has negative {v}")
    for q in system.poly.inequalities:
        if q.evaluate({k: values.get(k, Fraction(0)) for k in q.labels}) > q.rhs:
            raise AssertionError(f"certificate violates {q}")


def certify_choice(problem: ShuffleProblem, target: Mapping, name: str, choice: DecodingChoice,
                   gamma_filter: GammaFilter | None = None) -> Certificate | None:
    system = composite_system(problem, choice, gamma_filter)
    fixed = {}
    for v in system.rate_vars:
        key = v if v in target else v.message if v.message in target else str(v.message)
        if key not in target:
            raise KeyError(f"target lacks a rate for {v}")
        fixed[v] = as_fraction(target[key])
    if any(x < 0 for x in fixed.values()):
        return None
    out, aux = _lp_over_system(system, fixed, {})
    if out.status != simplex.OPTIMAL:
        return None
    values = dict(fixed)
    values.update({v: mpq_to_fraction(x) for v, x in zip(aux, out.x)})
    _verify(system, values)
    return Certificate(name, choice, values)


def achievable(problem: ShuffleProblem, target: Mapping, strategy="default", *,
               gamma_filter: GammaFilter | None = None) -> Certificate:
    """Certificate that ``target`` lies in the composite-coding region.

    ``target`` maps rate labels (or message ids) to rationals.  ``strategy``
    is a mode name or an iterable of ``(name, DecodingChoice)``.  Raises
    :class:`StrategyExhausted` when no choice works.
    """
    choices = decoding_strategies(problem, strategy) if isinstance(strategy, str) else strategy
    tried = []
    for name, choice in choices:
        cert = certify_choice(problem, target, name, choice, gamma_filter)
        if cert is not None:
            return cert
        tried.append(f"{name}: LP infeasible")
    raise StrategyExhausted(tried)


def inner_max_point(problem: ShuffleProblem, choice: DecodingChoice, objective: Mapping,
                    gamma_filter: GammaFilter | None = None):
    """Max of a rate objective over the lifted composite system.

    Returns ``(value, rate point)``; ``(None, None)`` when unbounded.  Equals
    the max over the projected region without computing the projection.
    """
    system = composite_system(problem, choice, gamma_filter)
    out, aux = _lp_over_system(system, {}, objective)
    if out.status == simplex.UNBOUNDED:
        return None, None
    if out.status != simplex.OPTIMAL:
        raise AssertionError("composite system is infeasible; the origin should always be feasible")
    point = {v: mpq_to_fraction(x) for v, x in zip(aux, out.x) if v.kind == "rate"}
    return mpq_to_fraction(out.value), point

