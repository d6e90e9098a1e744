"""Independent brute-force deciders and instance generators.

Nothing here calls the matching, GF(2) or decomposition code it is used to
check: 1-factors, circuits and permutation signs are recomputed naively.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from . import kernels
from .errors import TooLarge
from .graph import Graph, edge

if TYPE_CHECKING:
    from .witness import TwoEarInstance

MAX_ORIENTATION_EDGES = 20
MAX_DECOMPOSITION_EDGES = 16


def naive_factors(edges: Sequence[Tuple[int, int]]) -> List[FrozenSet[Tuple[int, int]]]:
    """Perfect matchings of the graph spanned by ``edges`` (no isolated vertices)."""
    verts = sorted({v for e in edges for v in e})
    out: List[FrozenSet[Tuple[int, int]]] = []

    def rec(left: FrozenSet[int], chosen: Tuple[Tuple[int, int], ...]):
        if not left:
            out.append(frozenset(chosen))
            return
        v = min(left)
        for e in edges:
            if v in e:
                w = e[0] if e[1] == v else e[1]
                if w in left:
                    rec(left - {v, w}, chosen + (e,))

    rec(frozenset(verts), ())
    return out


def _inversion_parity(seq: Sequence[int], ref: Sequence[int]) -> int:
    pos = {v: i for i, v in enumerate(ref)}
    p = [pos[v] for v in seq]
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv & 1


def brute_force_orientation(g: Graph, threads: Optional[int] = None) -> Optional[int]:
    """Smallest orientation bitmask equalising all 1-factor signs, or None.

    Bit convention matches ``pflab.engine.Orientation``. Reversing every edge
    shifts all signs alike, so only orientations with the last edge
    small->large are swept.
    """
    if g.m > MAX_ORIENTATION_EDGES:
        raise TooLarge(f"{g.m} edges exceeds the brute-force limit of {MAX_ORIENTATION_EDGES}")
    edges = list(g.edges)
    for v in g.vertices:
        if g.degree(v) == 0:
            return 0
    factors = naive_factors(edges)
    if len(factors) <= 1:
        return 0
    idx = {e: i for i, e in enumerate(edges)}
    seqs = [[v for e in sorted(f) for v in e] for f in factors]
    base = [_inversion_parity(s, seqs[0]) for s in seqs]
    masks = [sum(1 << idx[e] for e in f) for f in factors]
    hi = 1 << max(g.m - 1, 0)
    threads = threads or kernels.thread_count()
    if threads <= 1 or hi < 4096:
        r = kernels.orientation_sweep(masks, base, 0, hi)
        return None if r < 0 else r
    step = -(-hi // (threads * 4))
    chunks = [(lo, min(lo + step, hi)) for lo in range(0, hi, step)]
    with ThreadPoolExecutor(threads) as pool:
        found = list(pool.map(lambda c: kernels.orientation_sweep(masks, base, c[0], c[1]), chunks))
    hits = [r for r in found if r >= 0]
    return min(hits) if hits else None


def brute_force_pfaffian(g: Graph, threads: Optional[int] = None) -> bool:
    return brute_force_orientation(g, threads) is not None


# exhaustive ear decompositions ------------------------------------------------

def _naive_circuits(edges: Sequence[Tuple[int, int]]) -> List[Tuple[FrozenSet[Tuple[int, int]], Tuple[int, ...]]]:
    adj: Dict[int, List[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    found = {}
    for s in sorted(adj):
        stack = [(s, [s])]
        while stack:
            x, path = stack.pop()
            for y in adj[x]:
                if y == s and len(path) >= 3:
                    es = frozenset(edge(path[i], path[(i + 1) % len(path)]) for i in range(len(path)))
                    found.setdefault(es, tuple(path))
                elif y > s and y not in path:
                    stack.append((y, path + [y]))
    return list(found.items())


def exhaustive_decompositions(g: Graph) -> int:
    """Minimum number of 2-ear steps over all ear decompositions of ``g``.

    Memoised search over edge sets of 1-extendible subgraphs; a step from
    ``H`` adds a circuit ``A`` meeting ``H`` whose pieces outside ``H`` are 1
    or 2 odd paths with inner vertices new, provided ``H + A`` is
    1-extendible and ``A`` alternates for one of its 1-factors.
    """
    if g.m > MAX_DECOMPOSITION_EDGES:
        raise TooLarge(f"{g.m} edges exceeds {MAX_DECOMPOSITION_EDGES}")
    all_edges = frozenset(g.edges)
    circuits = _naive_circuits(g.edges)

    @lru_cache(maxsize=None)
    def factors_of(es: FrozenSet) -> Tuple[FrozenSet, ...]:
        return tuple(naive_factors(sorted(es)))

    @lru_cache(maxsize=None)
    def one_ext(es: FrozenSet) -> bool:
        fs = factors_of(es)
        if not fs or frozenset().union(*fs) != es:
            return False
        return Graph((), es).is_connected()

    def arcs(a_edges, h_edges, h_verts):
        rest = a_edges - h_edges
        sub: Dict[int, List[int]] = {}
        for u, v in rest:
            sub.setdefault(u, []).append(v)
            sub.setdefault(v, []).append(u)
        seen = set()
        lengths = []
        for s in sub:
            if s not in h_verts:
                continue
            for nb in sub[s]:
                if edge(s, nb) in seen:
                    continue
                prev, cur, n = s, nb, 1
                seen.add(edge(s, nb))
                while cur not in h_verts:
                    nxt = [w for w in sub[cur] if w != prev]
                    if not nxt:
                        return None
                    prev, cur = cur, nxt[0]
                    seen.add(edge(prev, cur))
                    n += 1
                lengths.append(n)
        if len(seen) != len(rest):
            return None
        return lengths

    @lru_cache(maxsize=None)
    def best(h: FrozenSet) -> float:
        if h == all_edges:
            return 0
        h_verts = {v for e in h for v in e}
        out = float("inf")
        for a_edges, a_verts in circuits:
            if not (a_edges & h) or a_edges <= h:
                continue
            ls = arcs(a_edges, h, h_verts)
            if ls is None or len(ls) not in (1, 2) or any(n % 2 == 0 for n in ls):
                continue
            nh = h | a_edges
            if not one_ext(nh):
                continue
            if not any(len(a_edges & f) * 2 == len(a_edges) and
                       len({v for e in a_edges & f for v in e}) == len(a_verts) for f in factors_of(nh)):
                continue
            out = min(out, best(nh) + (len(ls) == 2))
        return out

    if g.m == 1:
        return 0
    res = min(best(frozenset([e])) for e in g.edges)
    if res == float("inf"):
        raise ValueError("graph has no ear decomposition (not 1-extendible?)")
    return int(res)


# graph families -------------------------------------------------------------

def _invariant(g: nx.Graph):
    deg = dict(g.degree())
    return (g.number_of_nodes(), g.number_of_edges(),
            tuple(sorted((deg[v], tuple(sorted(deg[w] for w in g[v]))) for v in g)))


class _IsoSet:
    """Isomorphism-class store keyed by a cheap invariant, VF2 inside buckets."""

    def __init__(self):
        self.buckets: Dict[tuple, List[nx.Graph]] = {}

    def add(self, g: nx.Graph) -> bool:
        bucket = self.buckets.setdefault(_invariant(g), [])
        for h in bucket:
            if nx.is_isomorphic(g, h):
                return False
        bucket.append(g)
        return True


def _to_graph(g: nx.Graph) -> Graph:
    mapping = {v: i for i, v in enumerate(sorted(g))}
    return Graph(range(len(mapping)), [(mapping[u], mapping[v]) for u, v in g.edges()])


def two_connected_graphs(max_vertices: int, max_edges: int, bipartite: bool = False) -> List[Graph]:
    """All 2-connected graphs within the bounds, one per isomorphism class.

    Grown from circuits by open ears (every 2-connected graph has an open ear
    decomposition); with ``bipartite`` only parity-respecting ears are added,
    which reaches every bipartite 2-connected graph since its subgraphs stay
    bipartite.
    """
    seen = _IsoSet()
    frontier = []
    for k in range(4 if bipartite else 3, max_vertices + 1, 2 if bipartite else 1):
        if k <= max_edges:
            c = nx.cycle_graph(k)
            seen.add(c)
            frontier.append(c)
    out = list(frontier)
    while frontier:
        nxt = []
        for g in frontier:
            n, m = g.number_of_nodes(), g.number_of_edges()
            colour = nx.bipartite.color(g) if bipartite else None
            for u, v in combinations(sorted(g), 2):
                for length in range(1, min(max_vertices - n + 1, max_edges - m) + 1):
                    if length == 1 and g.has_edge(u, v):
                        continue
                    if bipartite and (colour[u] != colour[v]) != (length % 2 == 1):
                        continue
                    h = g.copy()
                    chain = [u] + list(range(n, n + length - 1)) + [v]
                    nx.add_path(h, chain)
                    if seen.add(h):
                        nxt.append(h)
        out.extend(nxt)
        frontier = nxt
    return [_to_graph(g) for g in out]


def one_extendible_graphs(max_vertices: int, max_edges: int, bipartite: bool = False) -> List[Graph]:
    """All 1-extendible graphs within the bounds (K2 included), up to isomorphism.

    1-extendible graphs on 4 or more vertices are 2-connected, so the
    2-connected family is filtered with naive matching enumeration.
    """
    out = [Graph(range(2), [(0, 1)])] if max_vertices >= 2 and max_edges >= 1 else []
    for g in two_connected_graphs(max_vertices, max_edges, bipartite):
        if g.n % 2:
            continue
        fs = naive_factors(list(g.edges))
        if fs and frozenset().union(*fs) == frozenset(g.edges):
            out.append(g)
    return out


# seeded instances -------------------------------------------------------------

@dataclass(frozen=True)
class InstanceRecipe:
    kind: str = "random-2-ear-adjunction"
    seed: int = 0
    min_vertices: int = 4
    max_vertices: int = 10
    max_edges: int = 16
    count: int = 10


def random_bipartite_ears(rng: random.Random, n_target: int, m_target: int) -> Graph:
    """Random 1-extendible bipartite graph grown by odd ears between colour classes."""
    colour = {0: 0, 1: 1}
    es = {(0, 1)}
    n = 2
    for _ in range(200):
        if len(es) >= m_target:
            break
        black = [v for v in colour if colour[v] == 0]
        white = [v for v in colour if colour[v] == 1]
        u, w = rng.choice(black), rng.choice(white)
        room = min(n_target - n, m_target - len(es) - 1)
        lengths = [1] + [L for L in (3, 5) if L - 1 <= room]
        if edge(u, w) in es:
            lengths = lengths[1:]
        if not lengths:
            continue
        length = rng.choice(lengths)
        chain = [u] + list(range(n, n + length - 1)) + [w]
        for i, v in enumerate(chain[1:-1], start=1):
            colour[v] = i % 2
        n += length - 1
        es.update(edge(a, b) for a, b in zip(chain, chain[1:]))
    return Graph(range(n), es)


def generate_two_ear_instances(recipe: InstanceRecipe) -> Iterator["TwoEarInstance"]:
    """Seeded stream of 2-ear adjunctions to 1-extendible bipartite graphs.

    Each emitted instance satisfies the TwoEarInstance invariants; its
    ``class_ok`` flag records the bipartite-union class condition.
    """
    from .witness import TwoEarInstance, class_condition_violation

    if recipe.max_vertices < 4 or recipe.max_edges < 6:
        return
    if recipe.kind == "catalog":
        from .catalog import complete

        yield TwoEarInstance.build(complete(4), (0, 2), (1, 3), base_factor=None)
        return
    rng = random.Random(recipe.seed)
    emitted = 0
    attempts = 0
    while emitted < recipe.count and attempts < 200 * recipe.count:
        attempts += 1
        n_target = rng.randrange(max(4, recipe.min_vertices), recipe.max_vertices + 1)
        k = random_bipartite_ears(rng, n_target, recipe.max_edges - 2)
        bp = nx.bipartite.color(nx.Graph(list(k.edges)))
        black = [v for v in k.vertices if bp[v] == 0]
        white = [v for v in k.vertices if bp[v] == 1]
        if len(black) < 2 or len(white) < 2:
            continue
        e1 = edge(*rng.sample(black, 2))
        e2 = edge(*rng.sample(white, 2))
        try:
            inst = TwoEarInstance.build(k.add_edges([e1, e2]), e1, e2)
        except ValueError:
            continue
        inst = inst.with_label(class_condition_violation(inst) is None)
        emitted += 1
        yield inst


def all_two_ear_instances(max_vertices: int, max_edges: int) -> Iterator["TwoEarInstance"]:
    """Every 2-ear instance whose base is a bipartite 1-extendible graph in the bounds.

    Bases run over isomorphism classes; the ears are single edges, ``e1``
    joining two black vertices and ``e2`` two white ones, in every
    placement that satisfies the instance invariants. Instances are labelled
    like ``generate_two_ear_instances``.
    """
    from .witness import TwoEarInstance, class_condition_violation

    for k in one_extendible_graphs(max_vertices, max_edges - 2, bipartite=True):
        if k.n < 4:
            continue
        bp = nx.bipartite.color(nx.Graph(list(k.edges)))
        black = [v for v in k.vertices if bp[v] == 0]
        white = [v for v in k.vertices if bp[v] == 1]
        for e1 in combinations(black, 2):
            for e2 in combinations(white, 2):
                try:
                    inst = TwoEarInstance.build(k.add_edges([e1, e2]), e1, e2)
                except ValueError:
                    continue
                yield inst.with_label(class_condition_violation(inst) is None)

