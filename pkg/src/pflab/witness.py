"""Forbidden-structure search and the two-ear decision machinery.

A 2-ear instance is a 1-extendible graph ``G`` with independent edges
``e1, e2`` such that ``K = G - {e1, e2}`` is bipartite and 1-extendible
while neither ``G - e1`` nor ``G - e2`` is. Non-Pfaffian instances are
certified by a subgraph ``H`` that becomes an even subdivision of K3,3
after contracting odd circuits, together with a 1-factor of ``G - VH``.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .decomposition import _all_circuits, outer_arcs
from .engine import (
    EVEN,
    Certificate,
    Orientation,
    all_signs_equal,
    clockwise_parity,
    find_pfaffian_orientation,
)
from .errors import (
    EnumerationCapExceeded,
    EvenReducedTrace,
    HypothesisViolated,
    InvalidInput,
    InvariantViolation,
)
from .graph import Circuit, Edge, Graph, bipartition, circuits_of, contract, edge, is_bipartite, is_even_subdivision_of_k33
from .matchings import (
    DEFAULT_CAP,
    AlternatingCircuit,
    OneFactor,
    alternating_circuits,
    enumerate_one_factors,
    find_one_factor,
    is_alternating,
    is_one_extendible,
    is_one_factor,
)

log = logging.getLogger(__name__)

SEARCH_CAP = 2_000_000


# instances ---------------------------------------------------------------------

@dataclass(frozen=True)
class TwoEarInstance:
    g: Graph
    k: Graph
    e1: Edge
    e2: Edge
    f: OneFactor
    class_ok: Optional[bool] = None

    @classmethod
    def build(cls, g: Graph, e1: Sequence[int], e2: Sequence[int], base_factor=None) -> "TwoEarInstance":
        e1, e2 = edge(*e1), edge(*e2)
        if not g.has_edge(*e1) or not g.has_edge(*e2):
            raise HypothesisViolated("ears are edges of G", f"{e1}, {e2}")
        k = g.remove_edges([e1, e2])
        f = find_one_factor(k) if base_factor is None else OneFactor(edge(*e) for e in base_factor)
        if f is None:
            raise HypothesisViolated("K is 1-extendible", "K has no 1-factor")
        inst = cls(g, k, e1, e2, f)
        inst.validate()
        return inst

    def with_label(self, class_ok: bool) -> "TwoEarInstance":
        return replace(self, class_ok=class_ok)

    def validate(self) -> None:
        g, k, e1, e2 = self.g, self.k, self.e1, self.e2
        if e1 == e2 or set(e1) & set(e2):
            raise HypothesisViolated("e1 and e2 are distinct independent edges", f"{e1}, {e2}")
        if k != g.remove_edges([e1, e2]):
            raise HypothesisViolated("K = G - {e1, e2}")
        if not is_one_factor(k, self.f):
            raise HypothesisViolated("f is a 1-factor of K")
        if is_bipartite(g.remove_edges([e1])) or is_bipartite(g.remove_edges([e2])):
            raise HypothesisViolated("neither G - e1 nor G - e2 is bipartite")
        if not is_bipartite(k):
            raise HypothesisViolated("K is bipartite")
        if not is_one_extendible(k):
            raise HypothesisViolated("K is 1-extendible")
        if not is_one_extendible(g):
            raise HypothesisViolated("G is 1-extendible")

    def through_both(self, c: Circuit) -> bool:
        return self.e1 in c.edges and self.e2 in c.edges


def class_condition_violation(inst: TwoEarInstance, cap: int = DEFAULT_CAP) -> Optional[Tuple[Circuit, Circuit]]:
    """A pair of circuits through both ears, alternating for one 1-factor that
    avoids the ears, with two outer arcs and a non-bipartite union; None when
    no such pair exists."""
    seen = set()
    for f in enumerate_one_factors(inst.k, cap):
        both = [a.circuit for a in alternating_circuits(inst.g, f, cap) if inst.through_both(a.circuit)]
        for c, d in combinations(both, 2):
            if (c, d) in seen:
                continue
            seen.add((c, d))
            arcs = outer_arcs(c.vertices, c.edges, d.edges)
            if arcs is not None and len(arcs) == 2 and not is_bipartite(Graph((), c.edges | d.edges)):
                return c, d
    return None


# witnesses ---------------------------------------------------------------------

def _contract_simple(h: Graph, x: Circuit) -> Graph:
    con = contract(h, x.vertices)
    if any(len(src) > 1 for src in con.provenance.values()):
        raise InvalidInput("contraction merges parallel edges")
    return con.graph


@dataclass(frozen=True)
class K33Witness:
    """``h`` contracted along ``contraction_stack`` (each circuit in the ids of
    the graph reached so far) is an even subdivision of K3,3."""

    h: Graph
    complement: OneFactor
    contraction_stack: Tuple[Circuit, ...] = ()

    @property
    def odd_circuit(self) -> Optional[Circuit]:
        return self.contraction_stack[0] if self.contraction_stack else None

    def reduced(self) -> Graph:
        cur = self.h
        for x in self.contraction_stack:
            if not x.is_odd or not x.edges <= cur.edge_set:
                raise InvalidInput("stack entry is not an odd circuit of the current graph")
            cur = _contract_simple(cur, x)
        return cur

    def verify(self, g: Graph) -> bool:
        if not self.h.edge_set <= g.edge_set or not set(self.h.vertices) <= set(g.vertices):
            return False
        try:
            j = self.reduced()
        except InvalidInput:
            return False
        if not is_even_subdivision_of_k33(j):
            return False
        return is_one_factor(g.remove_vertices(self.h.vertices), self.complement)

    def to_json(self) -> dict:
        stack = [list(x.vertices) for x in self.contraction_stack]
        return {
            "H": [list(e) for e in self.h.edges],
            "odd_circuit": stack[0] if stack else None,
            "complement_factor": [list(e) for e in sorted(self.complement)],
            "contraction_stack": stack,
        }

    @classmethod
    def from_json(cls, data: dict) -> "K33Witness":
        stack = tuple(Circuit.from_cycle(c) for c in data.get("contraction_stack") or [])
        odd = data.get("odd_circuit")
        if odd is not None and (not stack or Circuit.from_cycle(odd) != stack[0]):
            raise InvalidInput("odd_circuit must head the contraction stack")
        if odd is None and stack:
            raise InvalidInput("contraction stack given without odd_circuit")
        h = Graph.from_edges([tuple(e) for e in data["H"]])
        comp = OneFactor(edge(*e) for e in data["complement_factor"])
        return cls(h, comp, stack)


class _Budget:
    def __init__(self, cap: int, what: str):
        self.left = cap
        self.cap = cap
        self.what = what

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise EnumerationCapExceeded(self.what, self.cap)


def _odd_paths(adj, s: int, t: int, free: set, max_inner: int, budget: _Budget) -> Iterator[List[int]]:
    """Simple paths ``s .. t`` of odd length whose inner vertices lie in ``free``."""
    seq = [s]

    def grow(v):
        for w in adj[v]:
            if w == t and len(seq) % 2 == 1:
                budget.spend()
                yield seq + [t]
            elif w in free and len(seq) <= max_inner:
                free.discard(w)
                seq.append(w)
                yield from grow(w)
                seq.pop()
                free.add(w)

    yield from grow(s)


def _k33_subdivisions(
    g: Graph,
    accept: Callable[[FrozenSet[int]], bool],
    required: Optional[int] = None,
    budget: Optional[_Budget] = None,
) -> Iterator[FrozenSet[Edge]]:
    """Edge sets of even K3,3 subdivisions in ``g`` whose vertex set passes ``accept``."""
    budget = budget or _Budget(SEARCH_CAP, "subdivision search steps")
    adj = {v: tuple(sorted(g.adjacency[v])) for v in g.vertices}
    hubs = [v for v in g.vertices if len(adj[v]) >= 3]
    if len(hubs) < 6 or g.n % 2:
        return
    colour = None
    bp = bipartition(g)
    if bp is not None:
        colour = {v: bp.side_of(v) for v in g.vertices}
    for six in combinations(hubs, 6):
        first, rest = six[0], six[1:]
        for pair in combinations(rest, 2):
            left = (first,) + pair
            right = tuple(v for v in rest if v not in pair)
            # odd branch paths force opposite colours in a bipartite host
            if colour is not None and (len({colour[v] for v in left}) > 1 or colour[left[0]] == colour[right[0]]):
                continue
            pairs = [(a, b) for a in left for b in right]
            free = set(g.vertices) - set(six)
            if required is not None and required not in six and required not in free:
                continue
            yield from _route(adj, pairs, 0, set(six), free, [], accept, required, budget)


def _route(adj, pairs, t, used, free, chosen, accept, required, budget):
    if t == len(pairs):
        vs = frozenset(used)
        if (required is None or required in vs) and accept(vs):
            yield frozenset(e for p in chosen for e in zip(p, p[1:]))
        return
    a, b = pairs[t]
    for p in _odd_paths(adj, a, b, free, len(free), budget):
        inner = p[1:-1]
        for v in inner:
            free.discard(v)
            used.add(v)
        chosen.append(p)
        yield from _route(adj, pairs, t + 1, used, free, chosen, accept, required, budget)
        chosen.pop()
        for v in inner:
            used.discard(v)
            free.add(v)


def _normalise(es: Iterable[Tuple[int, int]]) -> FrozenSet[Edge]:
    return frozenset(edge(*e) for e in es)


def find_even_k33_with_complement(g: Graph, cap: int = SEARCH_CAP) -> Optional[K33Witness]:
    """Exhaustive search for an even K3,3 subdivision ``J`` with ``G - VJ`` matchable."""
    memo: Dict[FrozenSet[int], Optional[OneFactor]] = {}

    def accept(vs):
        if vs not in memo:
            memo[vs] = find_one_factor(g.remove_vertices(vs))
        return memo[vs] is not None

    for es in _k33_subdivisions(g, accept, budget=_Budget(cap, "subdivision search steps")):
        h = Graph.from_edges(_normalise(es))
        return K33Witness(h, memo[frozenset(h.vertices)])
    return None


def find_reducible_k33_witness(g: Graph, cap: int = SEARCH_CAP) -> Optional[K33Witness]:
    """Search odd circuits ``X`` and subgraphs ``H`` containing them with
    ``H / VX`` an even K3,3 subdivision and ``G - VH`` matchable."""
    budget = _Budget(cap, "subdivision search steps")
    w = find_even_k33_with_complement(g, cap)
    if w is not None:
        return w
    for x in sorted((c for c in _all_circuits(g) if c.is_odd), key=lambda c: (len(c), c.vertices)):
        con = contract(g, x.vertices)
        gx, v = con.graph, con.vertex
        xs = set(x.vertices)
        memo: Dict[FrozenSet[int], Optional[OneFactor]] = {}

        def accept(vs, xs=xs, v=v, memo=memo):
            if vs not in memo:
                memo[vs] = find_one_factor(g.remove_vertices((vs - {v}) | xs))
            return memo[vs] is not None

        for es in _k33_subdivisions(gx, accept, required=v, budget=budget):
            lifted = {con.provenance[e][0] for e in es} | x.edges
            h = Graph.from_edges(lifted)
            vs = frozenset(h.vertices)
            return K33Witness(h, memo[(vs - xs) | {v}], (x,))
    return None


# Pair refinement ---------------------------------------------------------------

def _parity_of_sum(o: Orientation, edges: FrozenSet[Edge]) -> int:
    """Parity of the number of clockwise even circuits in an even edge set."""
    return sum(1 for c in circuits_of(edges) if clockwise_parity(o, c) == EVEN) & 1


def shared_arcs(x: Circuit, y: Circuit) -> List[FrozenSet[Edge]]:
    """Edge sets of the maximal paths common to two circuits."""
    common = x.edges & y.edges
    if not common:
        return []
    return [frozenset(Graph((), common).induced(c).edges) for c in Graph((), common).components()]


def _as_circuit(c) -> Circuit:
    return c.circuit if isinstance(c, AlternatingCircuit) else c


def pair_is_refined(inst: TwoEarInstance, x: Circuit, y: Circuit, f: OneFactor, o: Orientation) -> bool:
    if inst.e1 in f or inst.e2 in f or not is_one_factor(inst.g, f):
        return False
    if not is_alternating(x, f) or not is_alternating(y, f) or x == y:
        return False
    if clockwise_parity(o, x) == clockwise_parity(o, y):
        return False
    arcs = shared_arcs(x, y)
    if len(arcs) not in (1, 2):
        return False
    if any(inst.e1 not in a and inst.e2 not in a for a in arcs):
        return False
    return any(inst.e1 in a for a in arcs) and any(inst.e2 in a for a in arcs)


def refine_pair(
    inst: TwoEarInstance,
    a,
    b,
    orientation: Optional[Orientation] = None,
    factor: Optional[OneFactor] = None,
    history: Optional[List[int]] = None,
) -> Tuple[Circuit, Circuit, OneFactor]:
    """Shrink an opposite-parity pair through both ears until the two circuits
    share one or two paths, each holding an ear edge and together both."""
    g = inst.g
    o = orientation or Orientation(g, 0)
    f = factor or (a.factor if isinstance(a, AlternatingCircuit) else inst.f)
    ai, bi = _as_circuit(a), _as_circuit(b)
    fi = OneFactor(f)
    if inst.e1 in fi or inst.e2 in fi:
        raise HypothesisViolated("the factor avoids both ears")
    if not (inst.through_both(ai) and inst.through_both(bi)):
        raise HypothesisViolated("both circuits contain e1 and e2")
    if not is_alternating(ai, fi) or not is_alternating(bi, fi):
        raise HypothesisViolated("both circuits are f-alternating")
    if clockwise_parity(o, ai) == clockwise_parity(o, bi):
        raise HypothesisViolated("the circuits have opposite clockwise parity")
    if pair_is_refined(inst, ai, bi, fi, o):
        return ai, bi, fi
    size = len(ai.edges | bi.edges)
    if history is not None:
        history.append(size)
    while True:
        gi = Graph.from_edges(ai.edges | bi.edges)
        f_loc = OneFactor(e for e in fi if e in gi.edge_set)
        best = None
        for alt in alternating_circuits(gi, f_loc):
            c = alt.circuit
            if c == ai:
                continue
            arcs = outer_arcs(ai.vertices, ai.edges, c.edges)
            if arcs is None or len(arcs) not in (1, 2):
                continue
            key = (len(arcs), len(c), c.vertices)
            if best is None or key < best[0]:
                best = (key, c)
        if best is None:
            raise InvariantViolation("no circuit with one or two outer arcs")
        bp = best[1]
        ci = ai.edges ^ bp.edges
        has1, has2 = inst.e1 in ci, inst.e2 in ci
        if has1 != has2:
            raise InvariantViolation("an alternating circuit holds exactly one ear edge")
        if has1:
            na = Circuit.from_edges(ci)
            nb_edges = bi.edges ^ bp.edges
            parts = circuits_of(nb_edges)
            if len(parts) != 1:
                raise InvariantViolation("B + B' is not a single circuit")
            ai, bi, fi = na, parts[0], OneFactor(fi ^ bp.edges)
        else:
            if _parity_of_sum(o, ci) == 1:
                if not pair_is_refined(inst, ai, bp, fi, o):
                    raise InvariantViolation("refined pair fails the postcondition")
                return ai, bp, fi
            ai = bp
        new = len(ai.edges | bi.edges)
        if new >= size:
            raise InvariantViolation("refinement did not shrink the union")
        size = new
        if history is not None:
            history.append(size)


# frames and cascades ------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """Two f-alternating circuits through both ears sharing one path.

    ``line`` is ``A - e1`` read from ``u1`` to ``v1``; ``e2`` sits before the
    outer arc ``P`` of ``B``, whose ends satisfy ``pos(v2) < pos(y0) < pos(x0)``.
    """

    inst: TwoEarInstance
    f: OneFactor
    a: Circuit
    b: Circuit
    line: Tuple[int, ...]
    p: Tuple[int, ...]

    @property
    def pos(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.line)}

    @property
    def u1(self) -> int:
        return self.line[0]

    @property
    def v1(self) -> int:
        return self.line[-1]

    @property
    def u2(self) -> int:
        return min(self.inst.e2, key=self.pos.__getitem__)

    @property
    def v2(self) -> int:
        return max(self.inst.e2, key=self.pos.__getitem__)

    @property
    def y0(self) -> int:
        return self.p[0]

    @property
    def x0(self) -> int:
        return self.p[-1]

    def segment(self, s: int, t: int) -> Tuple[int, ...]:
        """Vertices of ``A'[s, t]`` listed from ``s`` to ``t``."""
        i, j = self.pos[s], self.pos[t]
        return self.line[i: j + 1] if i <= j else self.line[j: i + 1][::-1]

    def segment_edges(self, s: int, t: int) -> FrozenSet[Edge]:
        seq = self.segment(s, t)
        return frozenset(edge(a, b) for a, b in zip(seq, seq[1:]))

    @property
    def p_edges(self) -> FrozenSet[Edge]:
        return frozenset(edge(a, b) for a, b in zip(self.p, self.p[1:]))

    @property
    def score(self) -> int:
        pos = self.pos
        return (pos[self.y0] - pos[self.v2]) + (pos[self.v1] - pos[self.x0])


def frame_of(inst: TwoEarInstance, f: OneFactor, a: Circuit, b: Circuit) -> Frame:
    """Label a pair with a unique shared path holding both ears; HypothesisViolated otherwise."""
    if not (inst.through_both(a) and inst.through_both(b)):
        raise HypothesisViolated("both circuits contain e1 and e2")
    if not is_alternating(a, f) or not is_alternating(b, f):
        raise HypothesisViolated("both circuits are f-alternating")
    arcs = outer_arcs(a.vertices, a.edges, b.edges)
    if arcs is None or len(arcs) != 1:
        raise HypothesisViolated("there is a unique shared path", f"{0 if arcs is None else len(arcs)} outer arcs")
    p = arcs[0]
    u, v = inst.e1
    path = list(Path_from_circuit(a, u, v))
    for line in (tuple(path), tuple(reversed(path))):
        pos = {w: i for i, w in enumerate(line)}
        lo = max(pos[w] for w in inst.e2)
        ends = sorted(p.ends, key=pos.__getitem__)
        if pos[ends[0]] >= lo:
            seq = p.vertices if p.vertices[0] == ends[0] else p.vertices[::-1]
            return Frame(inst, OneFactor(f), a, b, line, tuple(seq))
    raise HypothesisViolated("the shared path holds both ears")


def Path_from_circuit(c: Circuit, u: int, v: int) -> Tuple[int, ...]:
    """``c`` minus the edge ``uv`` read from ``u`` to ``v``."""
    vs = list(c.vertices)
    i = vs.index(u)
    rot = vs[i:] + vs[:i]
    if rot[1] == v:
        rot = [rot[0]] + rot[1:][::-1]
    if rot[-1] != v:
        raise InvalidInput("uv is not an edge of the circuit")
    return tuple(rot)


@dataclass(frozen=True)
class Member:
    circuit: Circuit
    x: int
    y: int
    path: Tuple[int, ...]  # the member's path outside A', from x to y

    @property
    def path_edges(self) -> FrozenSet[Edge]:
        return frozenset(edge(a, b) for a, b in zip(self.path, self.path[1:]))


@dataclass(frozen=True)
class Cascade:
    frame: Frame
    members: Tuple[Member, ...]
    contractions: Tuple[Circuit, ...] = ()
    stripped: Tuple[str, ...] = ()

    def __len__(self):
        return len(self.members)

    def arc_counts(self) -> List[Tuple[int, int]]:
        """``(p_i, q_i)``: paths shared with ``P`` and with ``A`` per member."""
        fr = self.frame
        out = []
        for m in self.members:
            p = len(shared_components(m.circuit.edges & fr.p_edges))
            q = len(shared_components(m.circuit.edges & fr.a.edges))
            out.append((p, q))
        return out

    @property
    def quantity(self) -> int:
        return sum(p + q for p, q in self.arc_counts())


def shared_components(es: FrozenSet[Edge]) -> List[FrozenSet[Edge]]:
    if not es:
        return []
    h = Graph((), es)
    return [frozenset(h.induced(c).edges) for c in h.components()]


def _k_orientation(inst: TwoEarInstance) -> Orientation:
    cert = find_pfaffian_orientation(inst.k)
    if not cert.is_pfaffian:
        raise HypothesisViolated("K is Pfaffian")
    return cert.orientation


def _member_from(fr: Frame, c: Circuit, anchor: int) -> Optional[Member]:
    pos = fr.pos
    mate = fr.f.mate(anchor)
    vs = list(c.vertices)
    i = vs.index(anchor)
    rot = vs[i:] + vs[:i]
    if rot[1] == mate:
        rot = [rot[0]] + rot[1:][::-1]
    walk = rot  # anchor first, mate last: the circuit minus the f-edge at anchor
    lo, hi = pos[fr.v2], pos[anchor]
    xi = next((t for t in range(1, len(walk)) if walk[t] in pos and lo <= pos[walk[t]] < hi), None)
    if xi is None:
        return None
    yi = max((t for t in range(xi) if walk[t] in pos and pos[walk[t]] >= hi), default=None)
    if yi is None or walk[yi] == anchor:
        return None
    x, y = walk[xi], walk[yi]
    path = tuple(walk[yi: xi + 1][::-1])
    body = set(fr.segment_edges(x, y)) | {edge(a, b) for a, b in zip(path, path[1:])}
    try:
        circ = Circuit.from_edges(body)
    except InvalidInput:
        return None
    if not is_alternating(circ, fr.f) or not circ.edges <= fr.inst.k.edge_set:
        return None
    return Member(circ, x, y, path)


def build_cascade(
    inst: TwoEarInstance,
    a,
    b,
    orientation: Optional[Orientation] = None,
    factor: Optional[OneFactor] = None,
) -> Cascade:
    """Greedy cascade along ``A'[y0, x0]``: each member reaches as far toward ``v1`` as possible."""
    f = OneFactor(factor or (a.factor if isinstance(a, AlternatingCircuit) else inst.f))
    fr = frame_of(inst, f, _as_circuit(a), _as_circuit(b))
    o = orientation or _k_orientation(inst)
    if clockwise_parity(o.transfer(inst.g), Circuit.from_edges(fr.a.edges ^ fr.b.edges)) != EVEN:
        raise HypothesisViolated("A + B is clockwise even under a Pfaffian orientation of K")
    pool = [alt.circuit for alt in alternating_circuits(inst.k, f)]
    pos = fr.pos
    members: List[Member] = []
    anchor = fr.y0
    while True:
        need = {edge(anchor, w) for w in (fr.line[pos[anchor] - 1], fr.line[pos[anchor] + 1])}
        best = None
        for c in pool:
            if not need <= c.edges:
                continue
            m = _member_from(fr, c, anchor)
            if m is None:
                continue
            if len(members) >= 1:
                prev2 = members[-2].y if len(members) >= 2 else fr.y0
                if not pos[prev2] < pos[m.x] < pos[anchor] and len(members) >= 2:
                    continue
                if len(members) == 1 and not pos[fr.y0] < pos[m.x] < pos[anchor]:
                    continue
            key = (-pos[m.y], len(m.path), m.circuit.vertices)
            if best is None or key < best[0]:
                best = (key, m)
        if best is None:
            raise InvariantViolation(f"no cascade member continues from {anchor}")
        m = best[1]
        if m.y == fr.x0:
            raise InvariantViolation("a cascade member ends at x0")
        members.append(m)
        if pos[m.y] > pos[fr.x0]:
            return Cascade(fr, tuple(members))
        anchor = m.y


def cascade_violations(c: Cascade) -> List[str]:
    """Broken cascade conditions; empty when (a)-(c) and pairwise meeting hold."""
    fr = c.frame
    pos = fr.pos
    out = []
    middle = set(fr.segment(fr.v2, fr.v1))
    mid_edges = fr.segment_edges(fr.v2, fr.v1)
    for i, m in enumerate(c.members):
        arcs = shared_components(m.circuit.edges & mid_edges)
        if len(arcs) != 1 or arcs[0] != fr.segment_edges(m.x, m.y):
            out.append(f"(a) member {i + 1}")
        if any(v in middle for v in m.path[1:-1]):
            out.append(f"(a) member {i + 1} path re-enters A'[v2, v1]")
    k = len(c.members)
    if k:
        m1 = c.members[0]
        if not (pos[fr.v2] <= pos[m1.x] < pos[fr.y0] and pos[m1.y] > pos[fr.y0]):
            out.append("(b) first member")
        if not pos[c.members[-1].y] > pos[fr.x0]:
            out.append("(b) last member")
    for i in range(1, k):
        lo = fr.y0 if i == 1 else c.members[i - 2].y
        prev = c.members[i - 1].y
        m = c.members[i]
        if not (pos[lo] < pos[m.x] < pos[prev] and pos[m.y] > pos[prev]):
            out.append(f"(c) member {i + 1}")
    allowed = set(fr.segment(fr.y0, fr.x0))
    for i, j in combinations(range(k), 2):
        meet = set(c.members[i].circuit.vertices) & set(c.members[j].circuit.vertices)
        if not meet <= allowed:
            out.append(f"members {i + 1} and {j + 1} meet outside A'[x0, y0]")
    return out


# traces ------------------------------------------------------------------------

@dataclass(frozen=True)
class Digit:
    value: str
    member: int        # index of the member whose path holds it; -1 for a 0 between members
    span: Tuple[int, ...]  # vertices of the shared stretch, in walking order


@dataclass(frozen=True)
class Trace:
    digits: Tuple[Digit, ...]

    @property
    def text(self) -> str:
        return "".join(d.value for d in self.digits)

    @property
    def reduced(self) -> str:
        return self.text.replace("2", "")

    def __str__(self):
        return self.text


def _contacts(fr: Frame, path: Sequence[int], member: int) -> List[Digit]:
    a_left = fr.segment_edges(fr.u1, fr.u2)
    pe = fr.p_edges
    out: List[Digit] = []
    cur, span = None, []
    for s, t in zip(path, path[1:]):
        e = edge(s, t)
        kind = "2" if e in a_left else "1" if e in pe else None
        if e in fr.a.edges | fr.b.edges and kind is None:
            raise InvariantViolation(f"member path uses {e} of A or B outside the recorded regions")
        if kind != cur and cur is not None:
            out.append(Digit(cur, member, tuple(span)))
            span = []
        if kind is not None:
            span = span or [s]
            span.append(t)
        cur = kind
    if cur is not None:
        out.append(Digit(cur, member, tuple(span)))
    return out


def trace_of(c: Cascade) -> Trace:
    """Digits met walking from ``x1`` to ``yk``: 0 on ``A'[x0, y0]``, 1 on ``P``, 2 on ``A'[u1, u2]``."""
    fr = c.frame
    digits: List[Digit] = []
    for i, m in enumerate(c.members):
        digits.extend(_contacts(fr, m.path, i))
        if i + 1 < len(c.members):
            digits.append(Digit("0", -1, fr.segment(m.y, c.members[i + 1].x)))
    drop_front = sum(1 for s in c.stripped if s == "front")
    drop_back = sum(1 for s in c.stripped if s == "back")
    return Trace(tuple(digits[drop_front: len(digits) - drop_back]))


def trace_law_violations(t: Trace) -> List[str]:
    s = t.text
    out = []
    if any(a == b for a, b in zip(s, s[1:])):
        out.append("equal consecutive digits")
    if "01" in s or "10" in s:
        out.append("01 or 10 in trace")
    return out


def normalize_trace(inst: TwoEarInstance, c: Cascade) -> Cascade:
    """Strip a leading or trailing 2 by recording the odd circuit whose
    contraction removes it; the result's trace starts and ends with 0 or 1."""
    fr = c.frame
    t = trace_of(c)
    stack = list(c.contractions)
    stripped = list(c.stripped)
    digits = list(t.digits)
    if digits and digits[0].value == "2":
        m = c.members[0]
        xp = digits[0].span[0]
        cut = m.path[: m.path.index(xp) + 1]
        body = {edge(a, b) for a, b in zip(cut, cut[1:])} | fr.segment_edges(xp, m.x)
        stack.append(Circuit.from_edges(body))
        stripped.append("front")
        digits = digits[1:]
    if digits and digits[-1].value == "2":
        m = c.members[-1]
        yp = digits[-1].span[-1]
        cut = m.path[m.path.index(yp):]
        body = {edge(a, b) for a, b in zip(cut, cut[1:])}
        body |= fr.segment_edges(m.y, fr.v1) | fr.segment_edges(fr.u1, yp) | {inst.e1}
        stack.append(Circuit.from_edges(body))
        stripped.append("back")
    for x in stack:
        if not x.is_odd:
            raise InvariantViolation("recorded contraction circuit is even")
    return replace(c, contractions=tuple(stack), stripped=tuple(stripped))


def flip_first_digit(c: Cascade) -> Tuple[OneFactor, Circuit, Circuit]:
    """``(f + C1, A + C1, B + C1)``: the alternative frame whose trace starts with 1 instead of 0."""
    fr = c.frame
    c1 = c.members[0].circuit
    a_star = circuits_of(fr.a.edges ^ c1.edges)
    b_star = circuits_of(fr.b.edges ^ c1.edges)
    if len(a_star) != 1 or len(b_star) != 1:
        raise InvariantViolation("flipped circuits are not single circuits")
    return OneFactor(fr.f ^ c1.edges), a_star[0], b_star[0]


# witness extraction -------------------------------------------------------------

def _image_circuit(x: Circuit, contracted: Sequence[Circuit]) -> Circuit:
    """``x`` seen in the graph after contracting ``contracted`` in order."""
    es = set(x.edges)
    for y in contracted:
        ys, w = set(y.vertices), min(y.vertices)
        es = {edge(w if a in ys else a, w if b in ys else b) for a, b in es}
        es = {e for e in es if e[0] != e[1]}
    return Circuit.from_edges(es)


def _certify(g: Graph, h_edges: Iterable[Edge], stack: Sequence[Circuit]) -> Optional[K33Witness]:
    h = Graph.from_edges(h_edges)
    comp = find_one_factor(g.remove_vertices(h.vertices))
    if comp is None:
        return None
    try:
        seq = [_image_circuit(x, stack[:i]) for i, x in enumerate(stack)]
    except InvalidInput:
        return None
    w = K33Witness(h, comp, tuple(seq))
    return w if w.verify(g) else None


def _union_edges(c: Cascade, members: Iterable[int]) -> set:
    fr = c.frame
    es = set(fr.a.edges | fr.b.edges)
    for i in members:
        es |= c.members[i].circuit.edges
    return es


def _alternating_five_edges(c: Cascade, t: Trace) -> Optional[set]:
    fr = c.frame
    s = t.text
    i = s.find("02020")
    if i < 0:
        return None
    owners = [d.member for d in t.digits[i: i + 5] if d.value == "2"]
    es = set(fr.segment_edges(fr.u1, fr.y0) | fr.segment_edges(fr.x0, fr.v1) | fr.p_edges) | {fr.inst.e1}
    for j in owners:
        es |= c.members[j].circuit.edges
    return es


def _starred_pattern_edges(c: Cascade, t: Trace) -> Optional[set]:
    """Union for ``02*202*20``: four detours into ``A'[u1, u2]`` plus the frame."""
    fr = c.frame
    m = re.search(r"02(.+)202(.+)20", t.text)
    if m is None:
        return None
    ds = t.digits
    first = ds[m.start() + 1]
    mid_a, mid_b = ds[m.end(1) + 1], ds[m.end(1) + 3]
    last = ds[m.end() - 2]
    h, i1, i2, j = first.member, mid_a.member, mid_b.member, last.member
    mh, mi1, mi2, mj = (c.members[t_] for t_ in (h, i1, i2, j))
    es = set(fr.segment_edges(fr.u1, fr.y0) | fr.segment_edges(mh.x, mj.y) | fr.segment_edges(fr.x0, fr.v1))
    es |= fr.p_edges | {fr.inst.e1}

    def piece(mem: Member, end: int, hit: int) -> set:
        a, b = mem.path.index(end), mem.path.index(hit)
        seq = mem.path[min(a, b): max(a, b) + 1]
        return {edge(p, q) for p, q in zip(seq, seq[1:])}

    es |= piece(mh, mh.x, first.span[0])
    es |= piece(mi1, mi1.y, mid_a.span[-1])
    es |= piece(mi2, mi2.x, mid_b.span[0])
    es |= piece(mj, mj.y, last.span[-1])
    return es


def _search_within(g: Graph, es: set, cap: int) -> Optional[K33Witness]:
    sub = Graph.from_edges(es)
    w = find_reducible_k33_witness(sub, cap)
    if w is None:
        return None
    comp = find_one_factor(g.remove_vertices(w.h.vertices))
    if comp is None:
        return None
    w = K33Witness(w.h, comp, w.contraction_stack)
    return w if w.verify(g) else None


def extract_witness(inst: TwoEarInstance, c: Cascade, cap: int = SEARCH_CAP) -> K33Witness:
    """Build the subgraph named by the normalised trace and certify it.

    Reduced length 1 takes the union of A, B and every member; the patterns
    02020 and 02*202*20 use their dedicated unions. Other shapes, or a union
    that fails to certify, fall back to a search confined to that union.
    """
    return _extract(inst, c, cap)[0]


def _extract(inst: TwoEarInstance, c: Cascade, cap: int) -> Tuple[K33Witness, str]:
    t = trace_of(c)
    r = t.reduced
    if len(r) % 2 == 0:
        raise EvenReducedTrace(f"reduced trace {r!r} has even length")
    everything = _union_edges(c, range(len(c.members)))
    if len(r) == 1:
        w = _certify(inst.g, everything, c.contractions)
        if w is not None:
            return w, "union"
    for build in (_alternating_five_edges, _starred_pattern_edges):
        es = build(c, t)
        if es is not None:
            w = _certify(inst.g, es, ())
            if w is not None:
                return w, "pattern"
    w = _search_within(inst.g, everything, cap)
    if w is None:
        raise InvariantViolation(f"no witness inside the cascade union (trace {t.text!r})")
    return w, "confined-search"


# Cascade member arcs -----------------------------------------------------------

def lemma4_check(inst: TwoEarInstance, c, a, factor: Optional[OneFactor] = None) -> bool:
    """Traversal directions of a K-circuit ``c`` along ``A'``, for both labellings of ``e1``.

    Walking ``C - a`` from the end nearer ``v2``, every edge met on
    ``A'[v2, v1]`` runs toward ``v2`` and every edge met on ``A'[u1, u2]``
    runs toward ``u2``.
    """
    cc, ac = _as_circuit(c), _as_circuit(a)
    f = OneFactor(factor or (a.factor if isinstance(a, AlternatingCircuit) else inst.f))
    if not inst.through_both(ac) or not is_alternating(ac, f) or not is_alternating(cc, f):
        return False
    if inst.e1 in cc.edges or inst.e2 in cc.edges:
        return False
    u, v = inst.e1
    for line in (Path_from_circuit(ac, u, v), Path_from_circuit(ac, v, u)):
        pos = {w: i for i, w in enumerate(line)}
        lo2, hi2 = sorted(pos[w] for w in inst.e2)
        right = {edge(line[i], line[i + 1]) for i in range(hi2, len(line) - 1)}
        left = {edge(line[i], line[i + 1]) for i in range(0, lo2)}
        for ae in cc.edges & right:
            near, far = sorted(ae, key=pos.__getitem__)
            walk = Path_from_circuit(cc, near, far)
            for s, t in zip(walk, walk[1:]):
                e = edge(s, t)
                if e in right and pos[s] < pos[t]:
                    return False
                if e in left and pos[s] > pos[t]:
                    return False
    return True


# the end-to-end decision ---------------------------------------------------------

def _frames(inst: TwoEarInstance, og: Orientation, cap: int) -> List[Frame]:
    out = []
    for f in enumerate_one_factors(inst.k, cap):
        cs = [alt.circuit for alt in alternating_circuits(inst.g, f, cap) if inst.through_both(alt.circuit)]
        for a in cs:
            for b in cs:
                if a == b:
                    continue
                try:
                    fr = frame_of(inst, f, a, b)
                except HypothesisViolated:
                    continue
                if clockwise_parity(og, Circuit.from_edges(a.edges ^ b.edges)) == EVEN:
                    out.append(fr)
    return out


def select_cascade(inst: TwoEarInstance, o_k: Orientation, cap: int = DEFAULT_CAP) -> Cascade:
    """Over all admissible frames: the widest outer stretch first, then the
    smallest total of shared paths between members and ``A``, ``P``."""
    og = o_k.transfer(inst.g)
    best = None
    for fr in _frames(inst, og, cap):
        try:
            c = build_cascade(inst, fr.a, fr.b, o_k, fr.f)
        except InvariantViolation:
            continue
        key = (-fr.score, c.quantity, fr.a.vertices, fr.b.vertices, tuple(sorted(fr.f)))
        if best is None or key < best[0]:
            best = (key, c)
    if best is None:
        raise InvariantViolation("no admissible frame yields a cascade")
    return best[1]


def _one_shared_path(inst: TwoEarInstance, x: Circuit, y: Circuit, f: OneFactor, og: Orientation) -> Tuple[Circuit, Circuit]:
    """Two shared paths: swap ``y`` for ``x`` plus the clockwise even half of ``x + y``."""
    parts = circuits_of(x.edges ^ y.edges)
    if len(parts) != 2:
        raise InvariantViolation("x + y is not two disjoint circuits")
    even = [d for d in parts if clockwise_parity(og, d) == EVEN]
    if len(even) != 1:
        raise InvariantViolation("x + y does not hold exactly one clockwise even circuit")
    ny = circuits_of(x.edges ^ even[0].edges)
    if len(ny) != 1 or not is_alternating(ny[0], f) or not inst.through_both(ny[0]):
        raise InvariantViolation("modified circuit is not an alternating circuit through both ears")
    return x, ny[0]


def theorem5_decide(inst: TwoEarInstance, cap: int = DEFAULT_CAP, search_cap: int = SEARCH_CAP) -> Certificate:
    """Pfaffian orientation or reducible K3,3 witness for a 2-ear instance.

    The base graph is decided first; a non-Pfaffian base yields a plain
    subdivision witness. Otherwise its Pfaffian orientation is extended, an
    opposite-parity pair through both ears is refined to one shared path, and
    the cascade built on the chosen frame names the witness.
    """
    inst.validate()
    bad = class_condition_violation(inst, cap)
    if bad is not None:
        raise HypothesisViolated(
            "G[C + D] is bipartite for circuits through both ears with two outer arcs",
            f"C={list(bad[0].vertices)} D={list(bad[1].vertices)}",
        )
    g = inst.g
    for e in (inst.e1, inst.e2):
        if is_one_extendible(g.remove_edges([e]), cap):
            raise HypothesisViolated("G arises from K by a 2-ear adjunction", f"G - {e} is 1-extendible")
    base = find_pfaffian_orientation(inst.k, cap)
    if not base.is_pfaffian:
        w = find_even_k33_with_complement(inst.k, search_cap)
        if w is None:
            raise InvariantViolation("non-Pfaffian bipartite base without a subdivision witness")
        comp = find_one_factor(g.remove_vertices(w.h.vertices))
        w = K33Witness(w.h, comp)
        return Certificate("witness", g, witness=w, meta={"route": "base"})
    o_k = base.orientation
    og = o_k.transfer(g)
    meta: Dict[str, object] = {"base_orientation": [list(a) for a in o_k.arcs()]}
    f = inst.f
    both = [alt.circuit for alt in alternating_circuits(g, f, cap) if inst.through_both(alt.circuit)]
    evens = [c for c in both if clockwise_parity(og, c) == EVEN]
    odds = [c for c in both if clockwise_parity(og, c) != EVEN]
    if not evens or not odds:
        o = og if not evens else og.reversed(inst.e1)
        if not all_signs_equal(o, cap):
            raise InvariantViolation("extended orientation is not Pfaffian")
        meta["route"] = "orientation"
        return Certificate("pfaffian", g, orientation=o, meta=meta)
    meta["route"] = "cascade"
    try:
        sizes: List[int] = []
        x, y, f2 = refine_pair(inst, evens[0], odds[0], og, f, sizes)
        if len(shared_arcs(x, y)) == 2:
            x, y = _one_shared_path(inst, x, y, f2, og)
        meta["refined"] = {"sizes": sizes, "a": list(x.vertices), "b": list(y.vertices)}
        c = select_cascade(inst, o_k, cap)
        t = trace_of(c)
        n = normalize_trace(inst, c)
        nt = trace_of(n)
        meta["cascade"] = {
            "length": len(c),
            "trace": t.text,
            "normalized": nt.text,
            "reduced": nt.reduced,
            "contractions": len(n.contractions),
            "violations": cascade_violations(c),
            "trace_laws": trace_law_violations(t),
            "odd_reduced": len(nt.reduced) % 2 == 1,
        }
        w, meta["cascade"]["extraction"] = _extract(inst, n, search_cap)
    except (InvariantViolation, EvenReducedTrace) as exc:
        log.warning("cascade route failed: %s", exc)
        meta["route"] = "direct-search"
        meta["machinery_error"] = f"{type(exc).__name__}: {exc}"
        w = find_reducible_k33_witness(g, search_cap)
        if w is None:
            raise InvariantViolation("non-Pfaffian instance without a reducible witness") from exc
    return Certificate("witness", g, witness=w, meta=meta)
