"""Finite-length XOR coded shuffle for the cyclic family.

Every message is cut into g-1 segments of L bits.  Sender j broadcasts one
L-bit word: the XOR of segment i of message (j+i) mod K for i = 1..g-1.
Receiver k recovers its segment u from sender (k-u) mod K by cancelling the
other g-2 segments, all of which it already holds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dc_model import MessageId, family_groups
from .errors import NonuniformCapacity
from .outer_bound import family_outer_region
from .polytope import VarLabel, feasible
from .rational import as_fraction, format_rational


@dataclass(frozen=True)
class CodedShuffleScheme:
    K: int
    r: int
    g: int
    segment_bits: int
    plan: tuple  # plan[j] = ((message node, segment index), ...) XORed by sender j

    @property
    def message_bits(self):
        return (self.g - 1) * self.segment_bits

    def side_info(self, k):
        """Nodes whose messages node k holds: all outside its residue class."""
        return frozenset(m for m in range(self.K) if (m - k) % self.g)

    def carrier(self, k, i):
        return (k - i) % self.K

    def to_json(self):
        return {"K": self.K, "r": self.r, "g": self.g, "segment_bits": self.segment_bits,
                "plan": [[[m, i] for m, i in terms] for terms in self.plan]}


def build_scheme(K: int, r: int, L: int) -> CodedShuffleScheme:
    if L < 1:
        raise ValueError("segment length must be at least one bit")
    g, _ = family_groups(K, r)
    plan = tuple(tuple(((j + i) % K, i) for i in range(1, g)) for j in range(K))
    scheme = CodedShuffleScheme(K, r, g, L, plan)

    carried = {}
    for j, terms in enumerate(plan):
        for m, i in terms:
            if m not in scheme.side_info(j):
                raise AssertionError(f"sender {j} would XOR message {m} it does not hold")
            if (m, i) in carried:
                raise AssertionError(f"segment {i} of message {m} sent twice")
            carried[(m, i)] = j
    expected = {(m, i) for m in range(K) for i in range(1, g)}
    if set(carried) != expected:
        raise AssertionError("segment coverage is incomplete")
    if any(carried[(m, i)] != scheme.carrier(m, i) for m, i in expected):
        raise AssertionError("segment carried by the wrong sender")
    return scheme


def _segments(message, g, L):
    return {i: message[(i - 1) * L:i * L] for i in range(1, g)}


@dataclass
class ShuffleTranscript:
    seed: int
    scheme: CodedShuffleScheme
    messages: list
    transmissions: list
    decoded: list
    verdicts: list

    @property
    def all_exact(self):
        return all(self.verdicts)

    def to_json(self):
        hexs = lambda bits: np.packbits(bits).tobytes().hex()  # noqa: E731
        return {
            "seed": self.seed,
            "scheme": self.scheme.to_json(),
            "bit_order": "msb-first, zero-padded to a whole byte",
            "messages": [hexs(m) for m in self.messages],
            "transmissions": [hexs(y) for y in self.transmissions],
            "decoded": [hexs(d) for d in self.decoded],
            "exact": list(self.verdicts),
        }


def draw_messages(scheme: CodedShuffleScheme, seed: int) -> list:
    rng = np.random.default_rng(seed)
    return [rng.integers(0, 2, size=scheme.message_bits, dtype=np.uint8) for _ in range(scheme.K)]


def encode(scheme: CodedShuffleScheme, messages) -> list:
    L, g = scheme.segment_bits, scheme.g
    segs = [_segments(m, g, L) for m in messages]
    out = []
    for terms in scheme.plan:
        word = np.zeros(L, dtype=np.uint8)
        for m, i in terms:
            word ^= segs[m][i]
        out.append(word)
    return out


def decode(scheme: CodedShuffleScheme, k: int, transmissions, side_messages) -> np.ndarray:
    """Receiver k's estimate of its message from the broadcasts and the
    messages it holds (``side_messages``: node -> bits, only side info used)."""
    L, g = scheme.segment_bits, scheme.g
    allowed = scheme.side_info(k)
    parts = []
    for u in range(1, g):
        j = scheme.carrier(k, u)
        word = transmissions[j].copy()
        for m, i in scheme.plan[j]:
            if i == u:
                continue
            if m not in allowed:
                raise AssertionError(f"receiver {k} lacks message {m} needed to cancel")
            word ^= side_messages[m][(i - 1) * L:i * L]
        parts.append(word)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)


def run(scheme: CodedShuffleScheme, seed: int) -> ShuffleTranscript:
    messages = draw_messages(scheme, seed)
    tx = encode(scheme, messages)
    decoded, verdicts = [], []
    for k in range(scheme.K):
        side = {m: messages[m] for m in scheme.side_info(k)}
        est = decode(scheme, k, tx, side)
        decoded.append(est)
        verdicts.append(bool(np.array_equal(est, messages[k])))
    return ShuffleTranscript(seed, scheme, messages, tx, decoded, verdicts)


@dataclass
class RateReport:
    capacity: Fraction
    blocklength: Fraction
    rates: tuple
    in_outer_region: bool
    binds_group_bounds: bool

    def to_json(self):
        return {"capacity": format_rational(self.capacity),
                "blocklength": format_rational(self.blocklength),
                "rates": [format_rational(x) for x in self.rates],
                "in_outer_region": self.in_outer_region,
                "binds_group_bounds": self.binds_group_bounds}


def rate_report(scheme: CodedShuffleScheme, capacities) -> RateReport:
    """Rates achieved when each L-bit word uses ``L/C`` channel uses.

    Every message gets (g-1) L bits over that blocklength, i.e. (g-1) C.
    """
    if isinstance(capacities, (list, tuple)):
        caps = {as_fraction(c) for c in capacities}
        if len(caps) != 1 or len(capacities) != scheme.K:
            raise NonuniformCapacity("the XOR scheme report needs one common capacity")
        c = caps.pop()
    else:
        c = as_fraction(capacities)
    if c <= 0:
        raise NonuniformCapacity("capacity must be positive to define a blocklength")
    L = scheme.segment_bits
    n = Fraction(L) / c
    rate = Fraction((scheme.g - 1) * L) / n
    rates = (rate,) * scheme.K
    outer = family_outer_region(scheme.K, scheme.r, c)
    point = {VarLabel.rate(MessageId(k, k % scheme.g)): rate for k in range(scheme.K)}
    tight = all(q.evaluate(point) == q.rhs for q in outer.inequalities)
    return RateReport(c, n, rates, feasible(outer, point), tight)
