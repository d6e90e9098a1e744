"""Orientations, 1-factor signs, clockwise parity and the Pfaffian decision.

Orientation bits follow a fixed convention: bit ``i`` of ``Orientation.bits``
is 0 when ``graph.edges[i]`` is directed from its smaller id to its larger
id, and 1 otherwise.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import gf2
from .errors import (
    InvalidInput,
    InvariantViolation,
    NoFactor,
    NotAFactor,
    NotOddCircuit,
    NotOneExtendible,
    OddCircuit,
)
from .graph import Circuit, Edge, Graph, contract, edge
from .matchings import (
    DEFAULT_CAP,
    OneFactor,
    alternating_circuits,
    enumerate_one_factors,
    factor_masks,
    find_one_factor,
    is_alternating,
    is_one_extendible,
    is_one_factor,
)

log = logging.getLogger(__name__)

EVEN, ODD = 0, 1


@dataclass(frozen=True)
class Orientation:
    graph: Graph
    bits: int = 0

    @classmethod
    def from_arcs(cls, g: Graph, arcs: Iterable[Sequence[int]]) -> "Orientation":
        bits = 0
        seen = set()
        for t, h in arcs:
            e = edge(t, h)
            if e not in g.edge_index:
                raise InvalidInput(f"arc {(t, h)} is not an edge")
            seen.add(e)
            if t > h:
                bits |= 1 << g.edge_index[e]
        if len(seen) != g.m:
            raise InvalidInput("orientation must direct every edge exactly once")
        return cls(g, bits)

    def arc(self, e: Sequence[int]) -> Tuple[int, int]:
        u, v = edge(*e)
        return (v, u) if self.bits >> self.graph.edge_index[(u, v)] & 1 else (u, v)

    def arcs(self) -> List[Tuple[int, int]]:
        return [self.arc(e) for e in self.graph.edges]

    def reversed(self, e: Sequence[int]) -> "Orientation":
        return Orientation(self.graph, self.bits ^ (1 << self.graph.edge_index[edge(*e)]))

    def transfer(self, g: Graph) -> "Orientation":
        """Same directions on the shared edges of ``g``; other edges small->large."""
        bits = 0
        for i, e in enumerate(g.edges):
            j = self.graph.edge_index.get(e)
            if j is not None and self.bits >> j & 1:
                bits |= 1 << i
        return Orientation(g, bits)


def clockwise_parity(o: Orientation, c: Circuit) -> int:
    """Parity of the circuit edges directed along its canonical sense (0 = even)."""
    if c.is_odd:
        raise OddCircuit("clockwise parity is defined for even circuits only")
    agree = sum(1 for a, b in c.traversal() if o.arc((a, b)) == (a, b))
    return agree & 1


def _perm_parity(seq: Sequence[int], ref: Sequence[int]) -> int:
    pos = {v: i for i, v in enumerate(ref)}
    perm = [pos[v] for v in seq]
    seen = [False] * len(perm)
    parity = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def _factor_sequence(o: Orientation, f: Iterable[Edge]) -> List[int]:
    return [v for e in sorted(f) for v in o.arc(e)]


def factor_sign(o: Orientation, reference: Iterable[Edge], f: Iterable[Edge]) -> int:
    """+1 if ``f`` written along ``o`` is an even permutation of ``reference``."""
    g = o.graph
    if not is_one_factor(g, reference) or not is_one_factor(g, f):
        raise NotAFactor("both arguments must be 1-factors of the host")
    p = _perm_parity(_factor_sequence(o, f), _factor_sequence(o, reference))
    return -1 if p else 1


def all_signs_equal(o: Orientation, cap: int = DEFAULT_CAP) -> bool:
    factors = enumerate_one_factors(o.graph, cap)
    if not factors:
        raise NoFactor("graph has no 1-factor")
    ref = _factor_sequence(o, factors[0])
    return all(_perm_parity(_factor_sequence(o, f), ref) == 0 for f in factors[1:])


@dataclass(frozen=True)
class IntractableSet:
    factor: OneFactor
    circuits: Tuple[Circuit, ...]


@dataclass
class Certificate:
    """Tagged union: ``kind`` is ``pfaffian``, ``intractable`` or ``witness``."""

    kind: str
    graph: Graph
    orientation: Optional[Orientation] = None
    intractable_set: Optional[IntractableSet] = None
    witness: Optional[object] = None
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pfaffian" if self.kind == "pfaffian" else "non-pfaffian"

    @property
    def is_pfaffian(self) -> bool:
        return self.kind == "pfaffian"


def _forward_count(c: Circuit) -> int:
    return sum(1 for a, b in c.traversal() if a < b)


def find_pfaffian_orientation(g: Graph, cap: int = DEFAULT_CAP) -> Certificate:
    """Decide a 1-extendible graph by one parity equation per f-alternating circuit.

    A circuit is clockwise odd iff the sum of its edges' direction bits is
    ``1 + (#edges traversed small->large)`` mod 2. An infeasible system yields
    a combination of circuits covering every edge evenly with an odd number
    of them clockwise even under the all-zero orientation.
    """
    if not is_one_extendible(g, cap):
        raise NotOneExtendible("graph is not 1-extendible")
    f = find_one_factor(g)
    circuits = [a.circuit for a in alternating_circuits(g, f, cap)]
    rows = [g.mask(c.edges) for c in circuits]
    rhs = [(1 + _forward_count(c)) & 1 for c in circuits]
    x, combo = gf2.solve(rows, rhs)
    if x is not None:
        return Certificate("pfaffian", g, orientation=Orientation(g, x), meta={"factor": sorted(f)})
    s = IntractableSet(f, tuple(circuits[j] for j in combo))
    return Certificate("intractable", g, intractable_set=s)


def decide(g: Graph, cap: int = DEFAULT_CAP) -> Certificate:
    """Pfaffian decision for any simple graph.

    Edges in no 1-factor are dropped and each remaining component (which is
    1-extendible) is decided on its own; certificates refer to ``g``.
    """
    masks = factor_masks(g, cap)
    if not masks:
        return Certificate("pfaffian", g, orientation=Orientation(g, 0), meta={"reason": "no 1-factor"})
    allowed = 0
    for m in masks:
        allowed |= m
    core = Graph(g.vertices, g.unmask(allowed))
    if core == g and g.is_connected():
        return find_pfaffian_orientation(g, cap)
    parts = [core.induced(c) for c in core.components()]
    bits_edges = []
    for part in parts:
        cert = find_pfaffian_orientation(part, cap)
        if not cert.is_pfaffian:
            others = core.remove_vertices(part.vertices)
            f = OneFactor(cert.intractable_set.factor | find_one_factor(others))
            s = IntractableSet(f, cert.intractable_set.circuits)
            return Certificate("intractable", g, intractable_set=s, meta={"component": list(part.vertices)})
        bits_edges.extend(a for a in cert.orientation.arcs())
    bits = 0
    for t, h in bits_edges:
        if t > h:
            bits |= 1 << g.edge_index[edge(t, h)]
    return Certificate("pfaffian", g, orientation=Orientation(g, bits))


def verify_intractable_set(g: Graph, s: IntractableSet) -> bool:
    if not s.circuits or not is_one_factor(g, s.factor):
        return False
    if len({c.edges for c in s.circuits}) != len(s.circuits):
        return False
    cover = 0
    zero = Orientation(g, 0)
    even = 0
    for c in s.circuits:
        if not c.edges <= g.edge_set or not is_alternating(c, s.factor):
            return False
        cover ^= g.mask(c.edges)
        if clockwise_parity(zero, c) == EVEN:
            even += 1
    return cover == 0 and even % 2 == 1


def _even_arc(x: Circuit, a: int, b: int) -> List[Edge]:
    """Edges of the even-length path of the odd circuit ``x`` from ``a`` to ``b``."""
    vs = list(x.vertices)
    k = len(vs)
    i, j = vs.index(a), vs.index(b)
    fwd = [vs[(i + t) % k] for t in range((j - i) % k + 1)]
    back = [vs[(i - t) % k] for t in range((i - j) % k + 1)]
    seq = fwd if (len(fwd) - 1) % 2 == 0 else back
    return [edge(seq[t], seq[t + 1]) for t in range(len(seq) - 1)]


def lift_intractable_set(g: Graph, x: Circuit, s: IntractableSet) -> IntractableSet:
    """Lift an intractable set of ``g / V(x)`` to one of ``g`` (``x`` odd).

    Members avoiding the contracted vertex are kept; the others are rerouted
    through the even side of ``x`` between the ends of their two edges.
    """
    if not x.is_odd or not x.edges <= g.edge_set:
        raise NotOddCircuit("x must be an odd circuit of g")
    con = contract(g, x.vertices)
    h, v = con.graph, con.vertex
    if not verify_intractable_set(h, s):
        raise InvalidInput("s is not an intractable set of the contracted graph")
    xs = set(x.vertices)

    def lift(e: Edge) -> Edge:
        return con.provenance[e][0]

    def x_end(e: Edge) -> int:
        a, b = lift(e)
        return a if a in xs else b

    e0 = s.factor.edge_at(v)
    x0 = x_end(e0)
    ring = list(x.vertices)
    k = len(ring)
    i = ring.index(x0)
    rest = [ring[(i + t) % k] for t in range(1, k)]
    g_star = {lift(e) for e in s.factor}
    g_star.update(edge(rest[t], rest[t + 1]) for t in range(0, k - 1, 2))
    lifted = []
    for c in s.circuits:
        if e0 not in c.edges:
            lifted.append(Circuit.from_edges(lift(e) for e in c.edges))
            continue
        ei = next(e for e in c.edges if v in e and e != e0)
        body = [lift(e) for e in c.edges if v not in e]
        body += [lift(e0), lift(ei)] + _even_arc(x, x0, x_end(ei))
        lifted.append(Circuit.from_edges(body))
    out = IntractableSet(OneFactor(g_star), tuple(lifted))
    if not verify_intractable_set(g, out):
        raise InvariantViolation("lifted set failed verification")
    return out
