"""MapReduce instances and their reduction to a multi-sender index-coding problem.

A :class:`DcInstance` fixes the map phase (which node maps which batch), the
reduce assignment and the broadcast link capacities.  The shuffle phase is
captured by :class:`ShuffleProblem`: one message ``(k, f)`` per batch ``f``
that node ``k`` did not map, and per sender ``j`` the set of messages it can
compute from its own batches.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DivisibilityError, InvalidInstance, UndeliverableMessage
from .rational import as_fraction, format_rational


@dataclass(frozen=True, order=True)
class MessageId:
    """Index of the IV bundle that ``node`` needs from batch ``batch``."""

    node: int
    batch: int

    def __str__(self):
        return f"({self.node},{self.batch})"

    @classmethod
    def parse(cls, text):
        k, f = text.strip().strip("()").split(",")
        return cls(int(k), int(f))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class DcInstance:
    K: int
    N: int
    Q: int
    F: int
    map_assignment: tuple[frozenset[int], ...]
    reduce_assignment: tuple[frozenset[int], ...]
    capacities: tuple[Fraction, ...]
    iv_bits: int = 1

    def __post_init__(self):
        object.__setattr__(self, "map_assignment",
                           tuple(frozenset(int(b) for b in m) for m in self.map_assignment))
        object.__setattr__(self, "reduce_assignment",
                           tuple(frozenset(int(q) for q in w) for w in self.reduce_assignment))
        object.__setattr__(self, "capacities", tuple(as_fraction(c) for c in self.capacities))

    @property
    def files_per_batch(self):
        return Fraction(self.N, self.F)

    @property
    def functions_per_node(self):
        return Fraction(self.Q, self.K)

    @property
    def message_bits(self):
        """Bits per message: files per batch x functions per node x IV width."""
        return self.files_per_batch * self.functions_per_node * self.iv_bits

    def to_json(self):
        return {
            "K": self.K,
            "N": self.N,
            "Q": self.Q,
            "F": self.F,
            "map_assignment": [sorted(m) for m in self.map_assignment],
            "reduce_assignment": [sorted(w) for w in self.reduce_assignment],
            "capacities": [format_rational(c) for c in self.capacities],
            "iv_bits": self.iv_bits,
        }

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            return cls(
                K=int(doc["K"]), N=int(doc["N"]), Q=int(doc["Q"]), F=int(doc["F"]),
                map_assignment=tuple(doc["map_assignment"]),
                reduce_assignment=tuple(doc["reduce_assignment"]),
                capacities=tuple(as_fraction(str(c)) for c in doc["capacities"]),
                iv_bits=int(doc.get("iv_bits", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInstance([Violation("PARSE", f"malformed instance document: {exc}")]) from exc


@dataclass(frozen=True)
class ShuffleProblem:
    messages: tuple[MessageId, ...]
    side_info: tuple[frozenset[MessageId], ...]
    capacities: tuple[Fraction, ...]
    origin: DcInstance | None = field(default=None, compare=False, repr=False)

    @property
    def K(self):
        return len(self.side_info)

    @property
    def M(self):
        return len(self.messages)

    def holders(self, msg):
        """Senders whose side information contains ``msg``."""
        return [j for j, s in enumerate(self.side_info) if msg in s]

    def wanted(self, k):
        return [m for m in self.messages if m.node == k]

    def shared(self, k, j):
        """Side information common to receiver ``k`` and sender ``j``."""
        return self.side_info[k] & self.side_info[j]

    def relabel(self, perm):
        """Rename node ``k`` to ``perm[k]`` throughout (batches unchanged)."""
        ren = lambda m: MessageId(perm[m.node], m.batch)  # noqa: E731
        side = [None] * self.K
        caps = [None] * self.K
        for k in range(self.K):
            side[perm[k]] = frozenset(ren(m) for m in self.side_info[k])
            caps[perm[k]] = self.capacities[k]
        return ShuffleProblem(tuple(sorted(ren(m) for m in self.messages)),
                              tuple(side), tuple(caps))


def validate(instance: DcInstance) -> list[Violation]:
    out = []
    K, N, Q, F = instance.K, instance.N, instance.Q, instance.F
    for name, val in (("K", K), ("N", N), ("Q", Q), ("F", F)):
        if val < 1:
            out.append(Violation("NONPOSITIVE_PARAM", f"{name} must be a positive integer, got {val}"))
    if out:
        return out
    if N % F:
        out.append(Violation("F_NOT_DIVIDES_N", f"batch count F={F} does not divide N={N}"))
    if Q % K:
        out.append(Violation("K_NOT_DIVIDES_Q", f"node count K={K} does not divide Q={Q}"))
    if instance.iv_bits < 1:
        out.append(Violation("NONPOSITIVE_PARAM", "iv_bits must be positive"))
    for name, seq in (("map_assignment", instance.map_assignment),
                      ("reduce_assignment", instance.reduce_assignment),
                      ("capacities", instance.capacities)):
        if len(seq) != K:
            out.append(Violation("SHAPE", f"{name} has {len(seq)} entries, expected K={K}"))
    if out:
        return out

    for k, m in enumerate(instance.map_assignment):
        bad = sorted(b for b in m if not 0 <= b < F)
        if bad:
            out.append(Violation("MAP_OUT_OF_RANGE", f"node {k} maps unknown batches {bad}"))
    mapped = set().union(*instance.map_assignment)
    for b in range(F):
        if b not in mapped:
            out.append(Violation("UNMAPPED_BATCH", f"unmapped batch {b}: no node maps it"))

    want = Q // K if Q % K == 0 else None
    seen: dict[int, int] = {}
    for k, w in enumerate(instance.reduce_assignment):
        bad = sorted(q for q in w if not 0 <= q < Q)
        if bad:
            out.append(Violation("REDUCE_OUT_OF_RANGE", f"node {k} reduces unknown functions {bad}"))
        if want is not None and len(w) != want:
            out.append(Violation("REDUCE_SIZE",
                                 f"node {k} reduces {len(w)} functions, expected Q/K={want}"))
        for q in sorted(w):
            if q in seen:
                out.append(Violation("REDUCE_NOT_DISJOINT",
                                     f"reduce assignment not disjoint: function {q} "
                                     f"assigned to nodes {seen[q]} and {k}"))
            else:
                seen[q] = k
    missing = sorted(set(range(Q)) - set(seen))
    if missing:
        out.append(Violation("REDUCE_NOT_COVERING", f"functions {missing} are assigned to no node"))

    for k, c in enumerate(instance.capacities):
        if c < 0:
            out.append(Violation("NEGATIVE_CAPACITY", f"link capacity C_{k}={c} is negative"))
    return out


def _require_valid(instance):
    problems = validate(instance)
    if problems:
        raise InvalidInstance(problems)


def computation_load(instance: DcInstance) -> Fraction:
    """Average map replication: total mapped batches over the batch count."""
    _require_valid(instance)
    return Fraction(sum(len(m) for m in instance.map_assignment), instance.F)


def derive_shuffle_problem(instance: DcInstance) -> ShuffleProblem:
    _require_valid(instance)
    K, F = instance.K, instance.F
    maps = instance.map_assignment
    messages = tuple(MessageId(k, f) for k in range(K) for f in range(F) if f not in maps[k])
    side = []
    for k in range(K):
        side.append(frozenset(m for m in messages if m.node != k and m.batch in maps[k]))
    for m in messages:
        if not any(m in s for s in side):
            raise UndeliverableMessage(f"message {m} is held by no sender")
    return ShuffleProblem(messages, tuple(side), instance.capacities, instance)


def _capacity_tuple(capacities, K):
    if isinstance(capacities, (str, int, Fraction)) or type(capacities).__name__ == "mpq":
        return (as_fraction(capacities),) * K
    caps = tuple(as_fraction(c) for c in capacities)
    if len(caps) != K:
        raise ValueError(f"expected {K} capacities, got {len(caps)}")
    return caps


def family_groups(K, r):
    """Return ``g`` and the residue classes ``{(k + i g) mod K}`` for k < g."""
    if not (0 < r < K) or K % (K - r):
        raise DivisibilityError(f"K−r must divide K (K={K}, r={r})")
    g = K // (K - r)
    return g, [[(k + i * g) % K for i in range(K - r)] for k in range(g)]


def gen_family(K: int, r: int, eta1: int = 1, Q: int | None = None,
               capacities: Sequence | Fraction | int = 1, iv_bits: int = 1) -> DcInstance:
    """Build the cyclic instance where node k maps every batch except ``k mod g``.

    ``g = K/(K-r)`` batches of ``eta1`` files each; node k reduces the k-th block
    of ``Q/K`` functions (``Q`` defaults to ``K``).
    """
    if Q is None:
        Q = K
    if not (0 < r < K) or K % (K - r):
        raise DivisibilityError(f"K−r must divide K (K={K}, r={r})")
    if Q % K:
        raise DivisibilityError(f"K must divide Q (K={K}, Q={Q})")
    if eta1 < 1:
        raise ValueError("eta1 must be positive")
    g = K // (K - r)
    eta2 = Q // K
    return DcInstance(
        K=K, N=g * eta1, Q=Q, F=g,
        map_assignment=tuple(frozenset(b for b in range(g) if b != k % g) for k in range(K)),
        reduce_assignment=tuple(frozenset(range(k * eta2, (k + 1) * eta2)) for k in range(K)),
        capacities=_capacity_tuple(capacities, K),
        iv_bits=iv_bits,
    )


def relabel_instance(instance: DcInstance, perm: Iterable[int]) -> DcInstance:
    perm = list(perm)
    K = instance.K
    maps, reds, caps = [None] * K, [None] * K, [None] * K
    for k in range(K):
        maps[perm[k]] = instance.map_assignment[k]
        reds[perm[k]] = instance.reduce_assignment[k]
        caps[perm[k]] = instance.capacities[k]
    return DcInstance(instance.K, instance.N, instance.Q, instance.F,
                      tuple(maps), tuple(reds), tuple(caps), instance.iv_bits)
