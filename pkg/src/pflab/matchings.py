"""1-factors, 1-extendibility, alternating circuits and tight cuts."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from . import kernels
from .errors import EnumerationCapExceeded, NotACut
from .graph import Circuit, Edge, Graph, circuits_of, edge

DEFAULT_CAP = 10**6


class OneFactor(frozenset):
    """A perfect matching, stored as a frozenset of ``(u, v)`` edges."""

    def mate(self, v: int) -> int:
        for a, b in self:
            if a == v:
                return b
            if b == v:
                return a
        raise KeyError(v)

    def edge_at(self, v: int) -> Edge:
        return edge(v, self.mate(v))

    def sorted_edges(self) -> List[Edge]:
        return sorted(self)

    def __repr__(self):
        return f"OneFactor({sorted(self)})"


@lru_cache(maxsize=8192)
def factor_masks(g: Graph, cap: int = DEFAULT_CAP) -> Tuple[int, ...]:
    """All 1-factors of ``g`` as bitmasks over ``g.edges``, in lexicographic order."""
    pos = {v: i for i, v in enumerate(g.vertices)}
    idx = g.edge_index
    nbrs = [[(pos[w], idx[edge(v, w)]) for w in g.adjacency[v]] for v in g.vertices]
    found = kernels.enumerate_matchings(g.n, nbrs, cap)
    if len(found) > cap:
        raise EnumerationCapExceeded("1-factors", cap)
    return tuple(found)


def enumerate_one_factors(g: Graph, cap: int = DEFAULT_CAP) -> List[OneFactor]:
    return [OneFactor(g.unmask(m)) for m in factor_masks(g, cap)]


@lru_cache(maxsize=8192)
def _first_factor_mask(g: Graph) -> Optional[int]:
    pos = {v: i for i, v in enumerate(g.vertices)}
    idx = g.edge_index
    nbrs = [[(pos[w], idx[edge(v, w)]) for w in g.adjacency[v]] for v in g.vertices]
    found = kernels.enumerate_matchings(g.n, nbrs, 0)
    return found[0] if found else None


def find_one_factor(g: Graph) -> Optional[OneFactor]:
    m = _first_factor_mask(g)
    return None if m is None else OneFactor(g.unmask(m))


def has_one_factor(g: Graph) -> bool:
    return _first_factor_mask(g) is not None


def is_one_factor(g: Graph, f: Iterable[Edge]) -> bool:
    f = [edge(*e) for e in f]
    if any(not g.has_edge(*e) for e in f):
        return False
    covered = [v for e in f for v in e]
    return len(covered) == len(set(covered)) == g.n


def is_one_extendible(g: Graph, cap: int = DEFAULT_CAP) -> bool:
    if g.n == 0 or not g.is_connected():
        return False
    union = 0
    for m in factor_masks(g, cap):
        union |= m
    return union == (1 << g.m) - 1 and g.m > 0


def is_alternating(c: Circuit, f: Iterable[Edge]) -> bool:
    """True if ``f`` restricted to the circuit is a perfect matching of it."""
    if c.is_odd:
        return False
    fs = f if isinstance(f, (set, frozenset)) else set(f)
    hit = [e for e in c.edge_list if e in fs]
    return 2 * len(hit) == len(c) and len({v for e in hit for v in e}) == len(c)


@dataclass(frozen=True)
class AlternatingCircuit:
    circuit: Circuit
    factor: OneFactor

    @property
    def edges(self) -> FrozenSet[Edge]:
        return self.circuit.edges

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self.circuit.vertices

    def __len__(self):
        return len(self.circuit)

    def switched(self) -> OneFactor:
        return OneFactor(self.factor ^ self.circuit.edges)


def _sort_key(c: Circuit):
    return (len(c), c.vertices)


@lru_cache(maxsize=4096)
def _alternating_cache(g: Graph, f: OneFactor, cap: int) -> Tuple[Circuit, ...]:
    fm = g.mask(f)
    seen: Dict[FrozenSet[Edge], Circuit] = {}
    for m in factor_masks(g, cap):
        diff = fm ^ m
        if not diff:
            continue
        for c in circuits_of(g.unmask(diff)):
            seen.setdefault(c.edges, c)
    return tuple(sorted(seen.values(), key=_sort_key))


def alternating_circuits(g: Graph, f: Iterable[Edge], cap: int = DEFAULT_CAP) -> List[AlternatingCircuit]:
    """Every circuit ``C`` with ``f + C`` again a 1-factor of ``g``."""
    f = OneFactor(edge(*e) for e in f)
    return [AlternatingCircuit(c, f) for c in _alternating_cache(g, f, cap)]


@lru_cache(maxsize=1024)
def all_alternating_circuits(g: Graph, cap: int = DEFAULT_CAP) -> Tuple[Circuit, ...]:
    """Circuits alternating with respect to some pair of 1-factors."""
    seen = {}
    for m in factor_masks(g, cap):
        for c in _alternating_cache(g, OneFactor(g.unmask(m)), cap):
            seen.setdefault(c.edges, c)
    return tuple(sorted(seen.values(), key=_sort_key))


def is_tight_cut(g: Graph, cut: Iterable[Edge], cap: int = DEFAULT_CAP) -> bool:
    cut = {edge(*e) for e in cut}
    if not cut or any(not g.has_edge(*e) for e in cut):
        raise NotACut("cut edges must be edges of the graph")
    if len(g.remove_edges(cut).components()) <= len(g.components()):
        raise NotACut("removing the edges does not disconnect the graph")
    cm = g.mask(cut)
    return all(bin(m & cm).count("1") == 1 for m in factor_masks(g, cap))


def complementary_factor_exists(g: Graph, h_vertices: Iterable[int]) -> Optional[OneFactor]:
    """A 1-factor of ``g - h_vertices`` (empty when nothing remains), or None."""
    return find_one_factor(g.remove_vertices(h_vertices))
