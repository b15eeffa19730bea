"""Exact rational polyhedra over labeled, nonnegative variables.

Every system here has the form ``{x >= 0 : a_i . x <= b_i}``.  All arithmetic
is exact: public values are ``fractions.Fraction``; the inner loops of the
projection and LP code run on ``gmpy2.mpq``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from . import simplex
from .dc_model import MessageId
from .errors import (BlowupBudgetExceeded, DimensionCapExceeded, Infeasible,
                     MissingCoordinate, Unbounded, UnboundedPolytope)
from .rational import as_fraction, format_rational, mpq_to_fraction, pretty_rational, to_mpq

# ---------------------------------------------------------------- labels

_KIND_ORDER = {"rate": 0, "partial": 1, "composite": 2, "named": 3}


@dataclass(frozen=True, eq=False)
class VarLabel:
    """Variable name: a message rate, a per-sender partial rate, a composite rate,
    or a free-form name (generic systems)."""

    kind: str
    message: MessageId | None = None
    sender: int | None = None
    subset: frozenset | None = None
    name: str | None = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown label kind {self.kind!r}")
        if self.kind == "composite" and not self.subset:
            raise ValueError("composite-rate labels need a nonempty message set")
        msg = (self.message.node, self.message.batch) if self.message else ()
        sub = tuple(sorted((m.node, m.batch) for m in self.subset)) if self.subset else ()
        key = (_KIND_ORDER[self.kind], self.sender if self.sender is not None else -1,
               len(sub), sub, msg, self.name or "")
        # labels are hashed and ordered constantly inside elimination loops
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, VarLabel) and self._hash == other._hash
                and self._key == other._key)

    @classmethod
    def rate(cls, msg):
        return cls("rate", message=msg)

    @classmethod
    def partial(cls, msg, sender):
        return cls("partial", message=msg, sender=sender)

    @classmethod
    def composite(cls, subset, sender):
        return cls("composite", sender=sender, subset=frozenset(subset))

    @classmethod
    def named(cls, name):
        return cls("named", name=name)

    def sort_key(self):
        return self._key

    def __lt__(self, other):
        return self._key < other._key

    def __str__(self):
        if self.kind == "rate":
            return f"R{self.message}"
        if self.kind == "partial":
            return f"R{self.message}@{self.sender}"
        if self.kind == "composite":
            inner = ",".join(str(m) for m in sorted(self.subset))
            return f"gamma{{{inner}}}@{self.sender}"
        return self.name

    __repr__ = __str__

    _MSG = r"\((-?\d+),(-?\d+)\)"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if m := re.fullmatch(r"R" + cls._MSG + r"@(\d+)", text):
            return cls.partial(MessageId(int(m[1]), int(m[2])), int(m[3]))
        if m := re.fullmatch(r"R" + cls._MSG, text):
            return cls.rate(MessageId(int(m[1]), int(m[2])))
        if m := re.fullmatch(r"gamma\{(.*)\}@(\d+)", text):
            msgs = [MessageId(int(a), int(b)) for a, b in re.findall(cls._MSG, m[1])]
            return cls.composite(msgs, int(m[2]))
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_\[\].]*", text):
            return cls.named(text)
        raise ValueError(f"cannot parse variable label {text!r}")


def _as_label(v):
    return v if isinstance(v, VarLabel) else VarLabel.named(str(v))


# ---------------------------------------------------------------- inequalities

@dataclass(frozen=True)
class LinearInequality:
    """``sum coeffs[v] * v <= rhs`` with only nonzero coefficients stored."""

    coeffs: tuple
    rhs: Fraction

    @classmethod
    def make(cls, coeffs: Mapping, rhs) -> "LinearInequality":
        items = [(_as_label(k), as_fraction(v)) for k, v in coeffs.items()]
        items = sorted(((k, v) for k, v in items if v), key=lambda kv: kv[0].sort_key())
        if not items:
            raise ValueError("an inequality needs at least one nonzero coefficient")
        return cls(tuple(items), as_fraction(rhs))

    def as_dict(self):
        return dict(self.coeffs)

    @property
    def labels(self):
        return [k for k, _ in self.coeffs]

    def evaluate(self, point: Mapping) -> Fraction:
        return sum((c * as_fraction(point[k]) for k, c in self.coeffs), Fraction(0))

    def normalized(self) -> "LinearInequality":
        """Positive rescaling to coprime integer coefficients."""
        den = lcm(*(c.denominator for _, c in self.coeffs))
        nums = [int(c * den) for _, c in self.coeffs]
        g = gcd(*nums)
        scale = Fraction(den, g)
        return LinearInequality(tuple((k, c * scale) for k, c in self.coeffs), self.rhs * scale)

    def sort_key(self):
        return (tuple((k.sort_key(), -c) for k, c in self.coeffs), self.rhs)

    def __str__(self):
        parts = []
        for i, (k, c) in enumerate(self.coeffs):
            mag = abs(c)
            term = str(k) if mag == 1 else f"{pretty_rational(mag)} {k}"
            if i == 0:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return f"{' '.join(parts)} <= {pretty_rational(self.rhs)}"

    def to_json(self):
        return {"coeffs": {str(k): format_rational(c) for k, c in self.coeffs},
                "rhs": format_rational(self.rhs)}


# ---------------------------------------------------------------- polytope

@dataclass(frozen=True)
class HPolytope:
    variables: tuple
    inequalities: tuple = ()
    nonneg: bool = field(default=True)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(_as_label(v) for v in self.variables))
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable labels")
        if not self.nonneg:
            raise ValueError("only nonnegative systems are supported")
        known = set(self.variables)
        for ineq in self.inequalities:
            extra = [k for k in ineq.labels if k not in known]
            if extra:
                raise ValueError(f"inequality {ineq} uses undeclared variables {extra}")

    @classmethod
    def build(cls, variables: Iterable, rows: Iterable[tuple[Mapping, object]]) -> "HPolytope":
        """Convenience constructor from ``(coeff_map, rhs)`` pairs."""
        return cls(tuple(variables), tuple(LinearInequality.make(c, b) for c, b in rows))

    @property
    def dim(self):
        return len(self.variables)

    def canonical(self) -> "HPolytope":
        """Normalize rows, merge identical left sides (keeping the tighter rhs)
        and sort.  Does not run the LP redundancy test."""
        best: dict = {}
        for ineq in self.inequalities:
            nq = ineq.normalized()
            if nq.coeffs not in best or nq.rhs < best[nq.coeffs].rhs:
                best[nq.coeffs] = nq
        rows = sorted(best.values(), key=LinearInequality.sort_key)
        return HPolytope(tuple(sorted(self.variables)), tuple(rows))

    def canonical_text(self) -> str:
        return "\n".join(str(q) for q in self.canonical().inequalities) + "\n"

    def to_json(self):
        return {"vars": [str(v) for v in self.variables],
                "ineqs": [q.to_json() for q in self.inequalities]}

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        labels = [VarLabel.parse(v) for v in doc["vars"]]
        rows = [LinearInequality.make({VarLabel.parse(k): as_fraction(v)
                                       for k, v in q["coeffs"].items()}, as_fraction(q["rhs"]))
                for q in doc["ineqs"]]
        return cls(tuple(labels), tuple(rows))

    def __str__(self):
        return self.canonical_text()


# ---------------------------------------------------------------- LP

@dataclass
class LPResult:
    value: Fraction
    point: dict


def _lp_rows(variables, inequalities):
    idx = {v: i for i, v in enumerate(variables)}
    rows = [{idx[k]: to_mpq(c) for k, c in q.coeffs} for q in inequalities]
    rhs = [to_mpq(q.rhs) for q in inequalities]
    return idx, rows, rhs


def lp_max(poly: HPolytope, objective: Mapping) -> LPResult:
    """Exact optimum of a linear objective over ``poly`` plus an optimal point."""
    idx, rows, rhs = _lp_rows(poly.variables, poly.inequalities)
    cost = {}
    for k, c in objective.items():
        k = _as_label(k)
        if k not in idx:
            raise MissingCoordinate(f"objective uses unknown variable {k}")
        if c:
            cost[idx[k]] = to_mpq(c)
    out = simplex.maximize(len(idx), cost, rows, rhs)
    if out.status == simplex.INFEASIBLE:
        raise Infeasible("the system has no feasible point")
    if out.status == simplex.UNBOUNDED:
        raise Unbounded("objective is unbounded above")
    point = {v: mpq_to_fraction(out.x[i]) for v, i in idx.items()}
    return LPResult(mpq_to_fraction(out.value), point)


def feasible(poly: HPolytope, point: Mapping) -> bool:
    pt = {}
    for v in poly.variables:
        if v not in point:
            raise MissingCoordinate(f"point lacks a value for {v}")
        pt[v] = as_fraction(point[v])
    if any(x < 0 for x in pt.values()):
        return False
    return all(q.evaluate(pt) <= q.rhs for q in poly.inequalities)


# ---------------------------------------------------------------- redundancy

class _Row:
    __slots__ = ("coef", "rhs", "_key")

    def __init__(self, coef, rhs):
        self.coef = coef
        self.rhs = rhs
        self._key = None

    def key(self):
        """Left side scaled so its first coefficient (in label order) is +-1."""
        if self._key is None:
            first = min(self.coef, key=VarLabel.sort_key)
            s = abs(self.coef[first])
            self._key = (frozenset((k, v / s) for k, v in self.coef.items()), self.rhs / s)
        return self._key


def _rows_from(inequalities):
    return [_Row({k: to_mpq(c) for k, c in q.coeffs}, to_mpq(q.rhs)) for q in inequalities]


def _to_inequality(row):
    return LinearInequality.make({k: mpq_to_fraction(v) for k, v in row.coef.items()},
                                 mpq_to_fraction(row.rhs)).normalized()


def _tidy(rows):
    """Drop trivially implied rows and merge scalar multiples (keep the tighter)."""
    best = {}
    for row in rows:
        if not row.coef:
            if row.rhs < 0:
                raise Infeasible("projection is empty (0 <= negative)")
            continue
        if row.rhs >= 0 and all(v <= 0 for v in row.coef.values()):
            continue
        lhs, b = row.key()
        cur = best.get(lhs)
        if cur is None or b < cur[0]:
            best[lhs] = (b, row)
    return [row for _, row in best.values()]


def _dominance_filter(rows):
    """Under x >= 0, ``a.x <= alpha`` implies ``b.x <= beta`` when a >= b
    componentwise and alpha <= beta."""
    keep = []
    order = sorted(range(len(rows)), key=lambda i: len(rows[i].coef))
    for i in order:
        b = rows[i]
        dominated = False
        for a in keep:
            if a.rhs > b.rhs:
                continue
            if all(v >= b.coef.get(k, 0) for k, v in a.coef.items()) and \
                    all(k in a.coef or v <= 0 for k, v in b.coef.items()):
                dominated = True
                break
        if not dominated:
            keep.append(b)
    keep_ids = {id(r) for r in keep}
    return [r for r in rows if id(r) in keep_ids]


def _lp_prune(rows):
    """Exact LP redundancy test, one row at a time against the survivors."""
    labels = sorted({k for r in rows for k in r.coef}, key=VarLabel.sort_key)
    idx = {v: i for i, v in enumerate(labels)}
    dense = [{idx[k]: v for k, v in r.coef.items()} for r in rows]
    alive = [True] * len(rows)
    for i in range(len(rows)):
        others = [j for j in range(len(rows)) if j != i and alive[j]]
        out = simplex.maximize(len(labels), dense[i], [dense[j] for j in others],
                               [rows[j].rhs for j in others])
        if out.status == simplex.INFEASIBLE:
            raise Infeasible("system has no feasible point")
        if out.status == simplex.OPTIMAL and out.value <= rows[i].rhs:
            alive[i] = False
    return [r for r, a in zip(rows, alive) if a]


def _sorted_rows(rows):
    return sorted(rows, key=lambda r: _to_inequality(r).sort_key())


def remove_redundant(poly: HPolytope) -> HPolytope:
    """Minimal description of the same set, in canonical (normalized, sorted) form."""
    rows = _sorted_rows(_dominance_filter(_tidy(_rows_from(poly.inequalities))))
    rows = _lp_prune(rows)
    ineqs = sorted((_to_inequality(r) for r in rows), key=LinearInequality.sort_key)
    return HPolytope(tuple(sorted(poly.variables)), tuple(ineqs))


# ---------------------------------------------------------------- projection

@dataclass
class FMEStats:
    steps: list = field(default_factory=list)
    peak_rows: int = 0
    lp_prunes: int = 0


def fme_eliminate(poly: HPolytope, victims: Sequence, *, prune_threshold: int = 40,
                  max_rows: int = 20000, stats: FMEStats | None = None) -> HPolytope:
    """Project out ``victims`` by Fourier-Motzkin elimination.

    The variable eliminated next is the one with the fewest new combinations
    (positive rows x (negative rows + its own nonnegativity)), ties broken by
    position in ``victims``.  After each step scalar multiples are merged and
    rows implied under nonnegativity by a single other row are dropped; when
    more than ``prune_threshold`` rows remain the exact LP test prunes the
    rest.  More than ``max_rows`` intermediate rows raises
    :class:`BlowupBudgetExceeded`.
    """
    victims = [_as_label(v) for v in victims]
    declared = set(poly.variables)
    missing = [v for v in victims if v not in declared]
    if missing:
        raise ValueError(f"cannot eliminate undeclared variables {missing}")
    if stats is None:
        stats = FMEStats()
    rank = {v: i for i, v in enumerate(victims)}
    pending = list(dict.fromkeys(victims))
    rows = _tidy(_rows_from(poly.inequalities))
    trigger = prune_threshold

    while pending:
        pos_count = {v: 0 for v in pending}
        neg_count = {v: 0 for v in pending}
        for row in rows:
            for k, c in row.coef.items():
                if k in pos_count:
                    if c > 0:
                        pos_count[k] += 1
                    else:
                        neg_count[k] += 1
        x = min(pending, key=lambda v: (pos_count[v] * (neg_count[v] + 1), rank[v]))
        pending.remove(x)
        pos, neg, rest = [], [], []
        for row in rows:
            c = row.coef.get(x)
            if c is None:
                rest.append(row)
            elif c > 0:
                pos.append(row)
            else:
                neg.append(row)
        new = rest
        for p in pos:
            a = p.coef[x]
            # pair with the implicit x >= 0: drop x from p
            coef = {k: v for k, v in p.coef.items() if k != x}
            new.append(_Row(coef, p.rhs))
            for q in neg:
                b = -q.coef[x]
                coef = {k: v * b for k, v in p.coef.items() if k != x}
                for k, v in q.coef.items():
                    if k == x:
                        continue
                    nv = coef.get(k, 0) + v * a
                    if nv:
                        coef[k] = nv
                    else:
                        coef.pop(k, None)
                new.append(_Row(coef, p.rhs * b + q.rhs * a))
        stats.peak_rows = max(stats.peak_rows, len(new))
        if len(new) > max_rows:
            raise BlowupBudgetExceeded(
                f"Fourier-Motzkin produced {len(new)} rows eliminating {x} (cap {max_rows})")
        rows = _tidy(new)
        if len(rows) > trigger:
            rows = _dominance_filter(rows)
        if len(rows) > trigger:
            rows = _lp_prune(_sorted_rows(rows))
            stats.lp_prunes += 1
            trigger = max(prune_threshold, len(rows) * 3 // 2)
        stats.steps.append((str(x), len(pos), len(neg), len(rows)))

    kept = tuple(v for v in poly.variables if v not in rank)
    ineqs = sorted((_to_inequality(r) for r in rows), key=LinearInequality.sort_key)
    return HPolytope(kept, tuple(ineqs))


# ---------------------------------------------------------------- vertices

def _solve_square(mat, rhs):
    """Exact Gauss-Jordan; returns the unique solution or None if singular."""
    n = len(mat)
    a = [list(r) + [b] for r, b in zip(mat, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        rowc = [v * inv for v in a[col]]
        a[col] = rowc
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [u - f * w for u, w in zip(a[i], rowc)]
    return [a[i][n] for i in range(n)]


def vertices(poly: HPolytope, max_dim: int = 12) -> list[dict]:
    """All vertices, lexicographically sorted in variable order.

    Each vertex solves a square subsystem of tight constraints (facets of
    ``poly`` plus coordinate planes) and is kept when feasible.
    """
    n = poly.dim
    if n > max_dim:
        raise DimensionCapExceeded(f"dimension {n} exceeds vertex-enumeration cap {max_dim}")
    variables = sorted(poly.variables)
    if n == 0:
        return [{}]
    try:
        lp_max(poly, {v: 1 for v in variables})
    except Unbounded as exc:
        raise UnboundedPolytope("vertex enumeration needs a bounded polytope") from exc
    idx = {v: i for i, v in enumerate(variables)}
    cons = []
    for q in poly.inequalities:
        row = [mpq(0)] * n
        for k, c in q.coeffs:
            row[idx[k]] = to_mpq(c)
        cons.append((row, to_mpq(q.rhs)))
    for i in range(n):
        row = [mpq(0)] * n
        row[i] = mpq(-1)
        cons.append((row, mpq(0)))
    found = set()
    for combo in combinations(range(len(cons)), n):
        sol = _solve_square([cons[i][0] for i in combo], [cons[i][1] for i in combo])
        if sol is None:
            continue
        if all(sum((a * x for a, x in zip(row, sol)), mpq(0)) <= b for row, b in cons):
            found.add(tuple(sol))
    return [{v: mpq_to_fraction(x) for v, x in zip(variables, pt)} for pt in sorted(found)]


@dataclass
class Containment:
    contained: bool
    witness: dict | None = None

    def __bool__(self):
        return self.contained


def region_contains(outer: HPolytope, inner: HPolytope, max_dim: int = 12) -> Containment:
    """Whether every vertex of ``inner`` satisfies ``outer``."""
    if set(outer.variables) != set(inner.variables):
        raise ValueError("regions are over different variables")
    for v in vertices(inner, max_dim=max_dim):
        if not feasible(outer, v):
            return Containment(False, v)
    return Containment(True)


def same_region(a: HPolytope, b: HPolytope) -> bool:
    return bool(region_contains(a, b)) and bool(region_contains(b, a))
