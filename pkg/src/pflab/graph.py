"""Immutable simple graphs, paths and circuits, and the structural
constructions built on them (contraction, splicing, gluing, subdivision
recognition, bipartition and connectivity tests).

Edges are stored as ``(u, v)`` tuples with ``u < v``; every operation
returns a new graph.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    DegreeMismatch,
    DisconnectedContractionSet,
    EdgeNotPresent,
    EmptySet,
    InvalidInput,
    InvalidPairing,
    ParseError,
    TooSmall,
)

Edge = Tuple[int, int]


def edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Finite simple undirected graph with integer vertex ids."""

    __slots__ = ("vertices", "edges", "_hash", "__dict__")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Sequence[int]] = ()):
        es = set()
        vs = set(vertices)
        for e in edges:
            u, v = e
            if u == v:
                raise InvalidInput(f"loop at vertex {u}")
            es.add(edge(u, v))
            vs.add(u)
            vs.add(v)
        self.vertices: Tuple[int, ...] = tuple(sorted(vs))
        self.edges: Tuple[Edge, ...] = tuple(sorted(es))
        self._hash = hash((self.vertices, self.edges))

    @classmethod
    def from_edges(cls, edges, vertices=()) -> "Graph":
        return cls(vertices, edges)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, edges={list(self.edges)})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        adj: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edge_index

    def incident(self, v: int) -> List[Edge]:
        return [edge(v, w) for w in self.adjacency[v]]

    # bitmask view over ``self.edges``
    def mask(self, edges: Iterable[Edge]) -> int:
        idx = self.edge_index
        out = 0
        for e in edges:
            out |= 1 << idx[edge(*e)]
        return out

    def unmask(self, mask: int) -> FrozenSet[Edge]:
        es = self.edges
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(es[i])
            mask >>= 1
            i += 1
        return frozenset(out)

    # derived graphs
    def induced(self, vertices: Iterable[int]) -> "Graph":
        vs = set(vertices)
        return Graph(vs, [e for e in self.edges if e[0] in vs and e[1] in vs])

    def edge_subgraph(self, edges: Iterable[Sequence[int]], vertices: Iterable[int] = ()) -> "Graph":
        es = [edge(*e) for e in edges]
        for e in es:
            if e not in self.edge_index:
                raise EdgeNotPresent(e)
        return Graph(vertices, es)

    def remove_vertices(self, vertices: Iterable[int]) -> "Graph":
        drop = set(vertices)
        return self.induced(v for v in self.vertices if v not in drop)

    def remove_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        drop = {edge(*e) for e in edges}
        return Graph(self.vertices, [e for e in self.edges if e not in drop])

    def add_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        return Graph(self.vertices, list(self.edges) + [edge(*e) for e in edges])

    def relabel(self, mapping: Dict[int, int]) -> "Graph":
        return Graph((mapping[v] for v in self.vertices), [(mapping[u], mapping[v]) for u, v in self.edges])

    def compact(self) -> Tuple["Graph", Dict[int, int]]:
        """Relabel onto ``0..n-1`` preserving order; returns the graph and old->new map."""
        mapping = {v: i for i, v in enumerate(self.vertices)}
        return self.relabel(mapping), mapping

    def disjoint_union(self, other: "Graph") -> Tuple["Graph", Dict[int, int]]:
        offset = (self.vertices[-1] + 1) if self.vertices else 0
        mapping = {v: offset + i for i, v in enumerate(other.vertices)}
        moved = other.relabel(mapping)
        return Graph(self.vertices + moved.vertices, self.edges + moved.edges), mapping

    def components(self) -> List[Tuple[int, ...]]:
        seen = set()
        comps = []
        adj = self.adjacency
        for s in self.vertices:
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        queue.append(y)
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def to_text(self) -> str:
        g, _ = self.compact()
        lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
        return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` / ``u v`` edge-list format (0-based ids)."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ParseError("empty input")
    try:
        head = [int(t) for t in rows[0]]
    except ValueError as exc:
        raise ParseError(f"bad header {rows[0]!r}") from exc
    if len(head) != 2 or head[0] < 0 or head[1] < 0:
        raise ParseError(f"header must be 'n m', got {rows[0]!r}")
    n, m = head
    if len(rows) - 1 != m:
        raise ParseError(f"header announces {m} edges, found {len(rows) - 1}")
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(row[0]), int(row[1])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer id") from exc
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {lineno}: id out of range")
        if u == v:
            raise ParseError(f"line {lineno}: loop")
        e = edge(u, v)
        if e in seen:
            raise ParseError(f"line {lineno}: duplicate edge {e}")
        seen.add(e)
    return Graph(range(n), seen)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


@dataclass(frozen=True)
class Path:
    """A simple path given by its vertex sequence."""

    vertices: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInput("path repeats a vertex")

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], start: Optional[int] = None) -> "Path":
        es = [edge(*e) for e in edges]
        if not es:
            if start is None:
                raise InvalidInput("empty path needs a start vertex")
            return cls((start,))
        adj: Dict[int, List[int]] = {}
        for u, v in es:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        if any(len(ns) > 2 for ns in adj.values()):
            raise InvalidInput("edge set is not a path")
        ends = sorted(v for v, ns in adj.items() if len(ns) == 1)
        if len(ends) != 2:
            raise InvalidInput("edge set is not a path")
        s = start if start is not None else ends[0]
        if s not in ends:
            raise InvalidInput("start is not an end of the path")
        seq = [s]
        prev = None
        cur = s
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            seq.append(cur)
        if len(seq) != len(adj):
            raise InvalidInput("edge set is not connected")
        return cls(tuple(seq))

    @property
    def ends(self) -> Tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    @property
    def edge_list(self) -> List[Edge]:
        vs = self.vertices
        return [edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    @property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(self.edge_list)

    def __len__(self):
        return len(self.vertices) - 1

    @property
    def is_ear(self) -> bool:
        return len(self) % 2 == 1


@dataclass(frozen=True)
class Circuit:
    """A circuit stored in canonical cyclic order.

    ``vertices`` starts at the smallest id and runs in the direction whose
    second vertex is smaller than the last one.
    """

    vertices: Tuple[int, ...]

    @classmethod
    def from_cycle(cls, seq: Sequence[int]) -> "Circuit":
        seq = list(seq)
        if len(seq) < 3 or len(set(seq)) != len(seq):
            raise InvalidInput("not a circuit")
        i = seq.index(min(seq))
        rot = seq[i:] + seq[:i]
        if rot[1] > rot[-1]:
            rot = [rot[0]] + rot[1:][::-1]
        return cls(tuple(rot))

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]]) -> "Circuit":
        es = {edge(*e) for e in edges}
        adj: Dict[int, List[int]] = {}
        for u, v in es:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        if len(es) < 3 or any(len(ns) != 2 for ns in adj.values()):
            raise InvalidInput("edge set is not a circuit")
        start = min(adj)
        seq = [start]
        prev, cur = None, start
        while True:
            a, b = adj[cur]
            nxt = b if a == prev else a
            if nxt == start:
                break
            seq.append(nxt)
            prev, cur = cur, nxt
        if len(seq) != len(adj):
            raise InvalidInput("edge set is not a single circuit")
        return cls.from_cycle(seq)

    @cached_property
    def edge_list(self) -> List[Edge]:
        vs = self.vertices
        k = len(vs)
        return [edge(vs[i], vs[(i + 1) % k]) for i in range(k)]

    @cached_property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(self.edge_list)

    def __len__(self):
        return len(self.vertices)

    @property
    def is_odd(self) -> bool:
        return len(self.vertices) % 2 == 1

    def traversal(self) -> List[Tuple[int, int]]:
        """Edges as (from, to) pairs along the canonical sense."""
        vs = self.vertices
        k = len(vs)
        return [(vs[i], vs[(i + 1) % k]) for i in range(k)]


def circuits_of(edges: Iterable[Edge]) -> List[Circuit]:
    """Split an edge set of even degrees whose components are circuits."""
    g = Graph((), edges)
    return [Circuit.from_edges(g.induced(c).edges) for c in g.components()]


@dataclass(frozen=True)
class Bipartition:
    m_side: FrozenSet[int]
    n_side: FrozenSet[int]

    def side_of(self, v: int) -> int:
        return 0 if v in self.m_side else 1


def bipartition(g: Graph) -> Optional[Bipartition]:
    """Two-colouring of ``g`` (smallest id of each component gets side M), or None."""
    colour: Dict[int, int] = {}
    adj = g.adjacency
    for s in g.vertices:
        if s in colour:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return None
    return Bipartition(
        frozenset(v for v, c in colour.items() if c == 0),
        frozenset(v for v, c in colour.items() if c == 1),
    )


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


def is_three_connected(g: Graph) -> bool:
    if g.n < 4:
        raise TooSmall("3-connectivity needs at least 4 vertices")
    if not g.is_connected():
        return False
    for k in (1, 2):
        for cut in combinations(g.vertices, k):
            if not g.remove_vertices(cut).is_connected():
                return False
    return True


@dataclass(frozen=True)
class Contraction:
    graph: Graph
    vertex: int
    # new edge -> original edges it came from (several when parallels merged)
    provenance: Dict[Edge, Tuple[Edge, ...]]


def contract(g: Graph, x: Iterable[int], require_connected: bool = True) -> Contraction:
    xs = set(x)
    if not xs:
        raise EmptySet("contraction set is empty")
    if not xs <= set(g.vertices):
        raise InvalidInput("contraction set is not a subset of the vertices")
    if require_connected and not g.induced(xs).is_connected():
        raise DisconnectedContractionSet(sorted(xs))
    w = min(xs)
    prov: Dict[Edge, List[Edge]] = {}
    for u, v in g.edges:
        a = w if u in xs else u
        b = w if v in xs else v
        if a == b:
            continue
        prov.setdefault(edge(a, b), []).append((u, v))
    vs = [v for v in g.vertices if v not in xs] + [w]
    return Contraction(Graph(vs, prov), w, {e: tuple(sorted(o)) for e, o in prov.items()})


def contract_vertex_set(g: Graph, x: Iterable[int]) -> Graph:
    """Contract ``x`` to its smallest id, merging parallels and dropping loops."""
    return contract(g, x).graph


def branch_paths(h: Graph) -> Optional[List[Path]]:
    """Maximal threads between vertices of degree != 2, or None if a component
    is a bare circuit."""
    adj = h.adjacency
    branch = {v for v in h.vertices if len(adj[v]) != 2}
    if not branch and h.m:
        return None
    paths = []
    used = set()
    for b in sorted(branch):
        for nb in adj[b]:
            if edge(b, nb) in used:
                continue
            seq = [b, nb]
            used.add(edge(b, nb))
            while seq[-1] not in branch:
                cur = seq[-1]
                nxt = adj[cur][0] if adj[cur][0] != seq[-2] else adj[cur][1]
                used.add(edge(cur, nxt))
                seq.append(nxt)
            paths.append(seq)
    if len(used) != h.m:
        return None
    return [Path(tuple(p)) if p[0] != p[-1] else None for p in paths]


def is_even_subdivision_of_k33(h: Graph) -> bool:
    if not h.is_connected() or h.n < 6:
        return False
    degs = [h.degree(v) for v in h.vertices]
    if any(d not in (2, 3) for d in degs) or degs.count(3) != 6:
        return False
    paths = branch_paths(h)
    if paths is None or len(paths) != 9 or any(p is None for p in paths):
        return False
    pairs = set()
    for p in paths:
        if len(p) % 2 == 0:
            return False
        pairs.add(edge(*p.ends))
    if len(pairs) != 9:
        return False
    skeleton = Graph((), pairs)
    bp = bipartition(skeleton)
    return bp is not None and len(bp.m_side) == 3 and len(bp.n_side) == 3


@dataclass(frozen=True)
class Spliced:
    graph: Graph
    splice: FrozenSet[Edge]
    k_map: Dict[int, int]


def splice(h: Graph, k: Graph, v: int, w: int, pairing: Optional[Dict[int, int]] = None) -> Spliced:
    """Splice ``h`` and ``k`` at ``v`` and ``w``.

    ``pairing`` maps each neighbour of ``v`` to a neighbour of ``w`` (ids of
    ``k``); the default pairs them in sorted order. Vertices of ``k - w`` are
    renumbered above ``max(h)``; ``k_map`` records the renumbering.
    """
    nv, nw = h.neighbors(v), k.neighbors(w)
    if len(nv) != len(nw):
        raise DegreeMismatch(f"deg {v} = {len(nv)} but deg {w} = {len(nw)}")
    if pairing is None:
        pairing = dict(zip(nv, nw))
    if set(pairing) != set(nv) or sorted(pairing.values()) != sorted(nw):
        raise InvalidPairing("pairing must be a bijection between the neighbourhoods")
    offset = h.vertices[-1] + 1
    rest = [x for x in k.vertices if x != w]
    k_map = {x: offset + i for i, x in enumerate(rest)}
    hv = h.remove_vertices([v])
    kw = k.remove_vertices([w]).relabel(k_map)
    cross = [edge(a, k_map[b]) for a, b in pairing.items()]
    g = Graph(hv.vertices + kw.vertices, hv.edges + kw.edges + tuple(cross))
    return Spliced(g, frozenset(cross), k_map)


@dataclass(frozen=True)
class Glued:
    graph: Graph
    edge: Edge
    k_map: Dict[int, int]


def glue(h: Graph, k: Graph, x: Sequence[int], y: Sequence[int], keep_edge: bool) -> Glued:
    """Identify edge ``x`` of ``h`` with ``y`` of ``k`` (``y[i]`` onto ``x[i]``)."""
    if not h.has_edge(*x):
        raise EdgeNotPresent(tuple(x))
    if not k.has_edge(*y):
        raise EdgeNotPresent(tuple(y))
    offset = h.vertices[-1] + 1
    k_map = {y[0]: x[0], y[1]: x[1]}
    rest = [v for v in k.vertices if v not in k_map]
    k_map.update({v: offset + i for i, v in enumerate(rest)})
    moved = k.relabel(k_map)
    e = edge(*x)
    es = set(h.edges) | set(moved.edges)
    if not keep_edge:
        es.discard(e)
    return Glued(Graph(set(h.vertices) | set(moved.vertices), es), e, k_map)
