"""Cycle and alternating spaces, ear decompositions and brick decomposition."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from . import gf2
from .errors import (
    EnumerationCapExceeded,
    InvariantViolation,
    IsBicritical,
    NoCircuitFound,
    NotOneExtendible,
    OddOrder,
)
from .graph import Circuit, Edge, Graph, Path, contract, edge, is_three_connected
from .matchings import (
    DEFAULT_CAP,
    OneFactor,
    alternating_circuits,
    factor_masks,
    find_one_factor,
    has_one_factor,
    is_one_extendible,
)


def cycle_space_dim(g: Graph) -> int:
    return g.m - g.n + len(g.components())


@dataclass(frozen=True)
class Gf2Space:
    """Row space over ``graph.edges``; ``basis`` rows are independent bitmasks."""

    graph: Graph
    basis: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, edges) -> bool:
        return gf2.in_span(self.graph.mask(edges), self.basis)


def cycle_space(g: Graph) -> Gf2Space:
    rows = []
    for c in nx.cycle_basis(nx.Graph(list(g.edges))):
        rows.append(g.mask(Circuit.from_cycle(c).edges))
    return Gf2Space(g, tuple(gf2.row_basis(rows)))


def alternating_space(g: Graph, f=None, cap: int = DEFAULT_CAP) -> Gf2Space:
    """Span of ``f + f'`` over all 1-factors ``f'``, which is the span of all alternating circuits."""
    if not is_one_extendible(g, cap):
        raise NotOneExtendible("graph is not 1-extendible")
    fm = g.mask(f) if f is not None else factor_masks(g, cap)[0]
    return Gf2Space(g, tuple(gf2.row_basis([fm ^ m for m in factor_masks(g, cap) if m != fm])))


def two_ear_lower_bound(g: Graph, f=None, cap: int = DEFAULT_CAP) -> int:
    return cycle_space_dim(g) - alternating_space(g, f, cap).dim


# ear decompositions -------------------------------------------------------------

def outer_arcs(h_vertices, h_edges, circuit_edges) -> Optional[List[Path]]:
    """Maximal pieces of the circuit outside ``h`` whose inner vertices avoid ``h``.

    None when a piece never returns to ``h`` (the circuit does not meet it).
    """
    hv = set(h_vertices)
    rest = [e for e in circuit_edges if e not in h_edges]
    adj: Dict[int, List[int]] = {}
    for u, v in rest:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    used = set()
    arcs = []
    for s in sorted(adj):
        if s not in hv:
            continue
        for nb in sorted(adj[s]):
            if edge(s, nb) in used:
                continue
            seq = [s, nb]
            used.add(edge(s, nb))
            while seq[-1] not in hv:
                nxt = [w for w in adj[seq[-1]] if w != seq[-2]]
                if not nxt:
                    return None
                used.add(edge(seq[-1], nxt[0]))
                seq.append(nxt[0])
            arcs.append(Path(tuple(seq)))
    if len(used) != len(rest):
        return None
    return arcs


@dataclass(frozen=True)
class EarStep:
    circuit: Circuit
    ears: Tuple[Path, ...]
    graph: Graph


@dataclass
class EarDecomposition:
    host: Graph
    start: Graph
    steps: List[EarStep] = field(default_factory=list)

    @property
    def graphs(self) -> List[Graph]:
        return [self.start] + [s.graph for s in self.steps]

    @property
    def ear_count(self) -> int:
        return sum(len(s.ears) for s in self.steps)

    @property
    def two_ear_steps(self) -> int:
        return sum(1 for s in self.steps if len(s.ears) == 2)

    def validate(self) -> None:
        """Raise InvariantViolation unless every defining condition holds."""
        if self.start.m != 1 or self.start.n != 2:
            raise InvariantViolation("first graph is not K2")
        if self.graphs[-1] != self.host:
            raise InvariantViolation("last graph is not the host")
        prev = self.start
        for i, s in enumerate(self.steps, 1):
            g = s.graph
            if not set(prev.edges) < set(g.edges) or not set(g.edges) <= set(self.host.edges):
                raise InvariantViolation(f"step {i} is not a proper extension inside the host")
            if not is_one_extendible(g):
                raise InvariantViolation(f"graph {i} is not 1-extendible")
            ce = s.circuit.edges
            if not ce <= g.edge_set or not (ce & prev.edge_set) or set(g.edges) - set(prev.edges) - ce:
                raise InvariantViolation(f"step {i}: circuit must cover the new edges and meet the old graph")
            arcs = outer_arcs(prev.vertices, prev.edge_set, ce)
            if arcs is None or sorted(a.edges for a in arcs) != sorted(e.edges for e in s.ears):
                raise InvariantViolation(f"step {i}: recorded ears do not match the circuit")
            if len(arcs) not in (1, 2) or not all(a.is_ear for a in arcs):
                raise InvariantViolation(f"step {i}: needs 1 or 2 odd ears")
            cm = g.mask(ce)
            if not any(2 * bin(m & cm).count("1") == len(ce) for m in factor_masks(g)):
                raise InvariantViolation(f"step {i}: circuit is not alternating")
            prev = g


@dataclass(frozen=True)
class Adjunction:
    circuit: Circuit
    ears: Tuple[Path, ...]


def find_ear_adjunction(g: Graph, h: Graph, f, cap: int = DEFAULT_CAP) -> Adjunction:
    """An ``f``-alternating circuit of ``g`` leaving ``h`` in one or two ears.

    Circuits with a single ear are preferred, then shorter circuits.
    """
    f = OneFactor(edge(*e) for e in f)
    best = None
    for a in alternating_circuits(g, f, cap):
        ce = a.edges
        if not (ce & h.edge_set) or ce <= h.edge_set:
            continue
        arcs = outer_arcs(h.vertices, h.edge_set, ce)
        if arcs is None or len(arcs) not in (1, 2) or not all(p.is_ear for p in arcs):
            continue
        key = (len(arcs), len(a.circuit), a.circuit.vertices)
        if best is None or key < best[0]:
            best = (key, Adjunction(a.circuit, tuple(arcs)))
    if best is None:
        raise NoCircuitFound("no alternating circuit with one or two ears")
    return best[1]


def ear_decomposition(g: Graph, f=None, cap: int = DEFAULT_CAP) -> EarDecomposition:
    if not is_one_extendible(g, cap):
        raise NotOneExtendible("graph is not 1-extendible")
    f = OneFactor(f) if f is not None else find_one_factor(g)
    e0 = min(f)
    h = Graph(e0, [e0])
    out = EarDecomposition(g, h)
    while h.m < g.m:
        adj = find_ear_adjunction(g, h, f, cap)
        h = Graph(set(h.vertices) | set(adj.circuit.vertices), set(h.edges) | adj.circuit.edges)
        out.steps.append(EarStep(adj.circuit, adj.ears, h))
    return out


@lru_cache(maxsize=None)
def _all_circuits(g: Graph) -> Tuple[Circuit, ...]:
    return tuple(Circuit.from_cycle(c) for c in nx.simple_cycles(nx.Graph(list(g.edges))))


@lru_cache(maxsize=None)
def _alt_dim(h: Graph) -> int:
    ms = factor_masks(h)
    return gf2.rank([ms[0] ^ m for m in ms[1:]])


def optimal_ear_decomposition(g: Graph, cap: int = 200_000) -> EarDecomposition:
    """Ear decomposition with the fewest 2-ear steps, by iterative deepening.

    A state is the current subgraph; each state is pruned with the bound
    ``(dim C(G) - dim C(H)) - (dim A(G) - dim A(H))`` on the 2-ear steps it
    still needs. ``cap`` limits the number of expanded states.
    """
    if not is_one_extendible(g):
        raise NotOneExtendible("graph is not 1-extendible")
    dc, da = cycle_space_dim(g), _alt_dim(g)
    circuits = [c for c in _all_circuits(g) if not c.is_odd]
    expanded = 0

    def bound(h: Graph) -> int:
        return (dc - cycle_space_dim(h)) - (da - _alt_dim(h))

    failed: Dict[Graph, int] = {}

    def successors(h: Graph):
        for c in circuits:
            ce = c.edges
            if not (ce & h.edge_set) or ce <= h.edge_set:
                continue
            arcs = outer_arcs(h.vertices, h.edge_set, ce)
            if arcs is None or len(arcs) not in (1, 2) or not all(p.is_ear for p in arcs):
                continue
            nh = Graph(set(h.vertices) | set(c.vertices), set(h.edges) | ce)
            if not is_one_extendible(nh):
                continue
            cm = nh.mask(ce)
            if any(2 * bin(m & cm).count("1") == len(ce) for m in factor_masks(nh)):
                yield EarStep(c, tuple(arcs), nh)

    def search(h: Graph, budget: int) -> Optional[List[EarStep]]:
        nonlocal expanded
        if h.m == g.m:
            return []
        if bound(h) > budget or failed.get(h, -1) >= budget:
            return None
        expanded += 1
        if expanded > cap:
            raise EnumerationCapExceeded("ear-decomposition states", cap)
        for step in successors(h):
            rest = search(step.graph, budget - (len(step.ears) == 2))
            if rest is not None:
                return [step] + rest
        failed[h] = budget
        return None

    starts = [Graph(e, [e]) for e in g.edges]
    for budget in range(dc - da, g.m + 1):
        for s in starts:
            steps = search(s, budget)
            if steps is not None:
                return EarDecomposition(g, s, steps)
    raise InvariantViolation("no ear decomposition found")


def min_two_ear_count(g: Graph, cap: int = 200_000) -> int:
    return optimal_ear_decomposition(g, cap).two_ear_steps


# barriers and bricks -----------------------------------------------------------

def is_bicritical(g: Graph) -> bool:
    if g.n % 2 or g.n < 2:
        raise OddOrder("bicriticality needs an even number of vertices, at least 2")
    return all(has_one_factor(g.remove_vertices(p)) for p in combinations(g.vertices, 2))


def odd_components(g: Graph, s) -> List[Tuple[int, ...]]:
    return [c for c in g.remove_vertices(s).components() if len(c) % 2]


def _is_barrier(g: Graph, s) -> bool:
    return len(s) >= 2 and len(odd_components(g, s)) == len(s)


def maximal_barrier(g: Graph) -> Tuple[int, ...]:
    """First barrier in (size, lexicographic) order, grown to an inclusion-maximal one."""
    if is_bicritical(g):
        raise IsBicritical("bicritical graphs have no barrier of size 2 or more")
    s = None
    for k in range(2, g.n + 1):
        s = next((c for c in combinations(g.vertices, k) if _is_barrier(g, c)), None)
        if s is not None:
            break
    if s is None:
        raise NotOneExtendible("no barrier found; graph is not 1-extendible")
    grown = True
    while grown:
        grown = False
        others = [v for v in g.vertices if v not in s]
        for k in range(1, len(others) + 1):
            t = next((c for c in combinations(others, k) if _is_barrier(g, tuple(sorted(s + c)))), None)
            if t is not None:
                s = tuple(sorted(s + t))
                grown = True
                break
    return s


@dataclass
class DecompositionNode:
    """``kind`` is one of barrier, 2cut, brick, frame, k2."""

    kind: str
    graph: Graph
    children: List["DecompositionNode"] = field(default_factory=list)
    meta: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"type": self.kind, "graph": [list(e) for e in self.graph.edges],
               "children": [c.to_json() for c in self.children]}
        out.update(self.meta)
        return out

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class BrickDecomposition:
    bricks: List[Graph]
    tree: DecompositionNode

    def barrier_cuts(self) -> List[Tuple[Graph, FrozenSet[Edge]]]:
        """Each barrier step's graph with the cut around one of its odd components.

        Reversing the step splices the pieces back together along exactly
        these cuts.
        """
        out = []
        for node in self.tree.walk():
            if node.kind == "barrier":
                for comp in node.meta["odd_components"]:
                    cs = set(comp)
                    cut = frozenset(e for e in node.graph.edges if (e[0] in cs) != (e[1] in cs))
                    out.append((node.graph, cut))
        return out


def _barrier_split(g: Graph) -> DecompositionNode:
    s = maximal_barrier(g)
    comps = odd_components(g, s)
    node = DecompositionNode("barrier", g, meta={"barrier": list(s), "odd_components": [list(c) for c in comps]})
    frame = g
    for comp in comps:
        frame = contract(frame, comp, require_connected=False).graph
    node.children.append(DecompositionNode("frame", frame))
    for comp in comps:
        outside = [v for v in g.vertices if v not in set(comp)]
        piece = contract(g, outside, require_connected=False).graph
        node.children.append(_decompose(piece))
    return node


def _two_cut_split(g: Graph) -> DecompositionNode:
    for u, v in combinations(g.vertices, 2):
        comps = g.remove_vertices((u, v)).components()
        if len(comps) > 1:
            break
    node = DecompositionNode("2cut", g, meta={"cut": [u, v]})
    for comp in comps:
        piece = g.induced(set(comp) | {u, v}).add_edges([(u, v)])
        node.children.append(_decompose(piece))
    return node


def _decompose(g: Graph) -> DecompositionNode:
    if g.n == 2:
        return DecompositionNode("k2", g)
    if not is_bicritical(g):
        return _barrier_split(g)
    if is_three_connected(g):
        return DecompositionNode("brick", g)
    return _two_cut_split(g)


def brick_decompose(g: Graph) -> BrickDecomposition:
    if not is_one_extendible(g):
        raise NotOneExtendible("graph is not 1-extendible")
    tree = _decompose(g)
    return BrickDecomposition([n.graph for n in tree.walk() if n.kind == "brick"], tree)
