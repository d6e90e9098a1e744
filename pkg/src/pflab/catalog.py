"""Named small graphs and the shipped edge-list catalog."""
from __future__ import annotations

from importlib import resources
from itertools import combinations
from typing import Dict, Sequence

from .graph import Graph, glue, read_graph, splice


def complete(n: int) -> Graph:
    return Graph(range(n), combinations(range(n), 2))


def cycle(n: int) -> Graph:
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(range(a + b), [(i, a + j) for i in range(a) for j in range(b)])


def k33() -> Graph:
    return complete_bipartite(3, 3)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(range(10), outer + spokes + inner)


def prism() -> Graph:
    return splice(complete(4), complete(4), 3, 3).graph


def subdivide(g: Graph, u: int, v: int, extra: int) -> Graph:
    """Replace edge ``uv`` by a path with ``extra`` new internal vertices."""
    base = g.vertices[-1] + 1
    chain = [u] + list(range(base, base + extra)) + [v]
    es = [e for e in g.edges if e != tuple(sorted((u, v)))]
    return Graph(list(g.vertices) + chain[1:-1], es + list(zip(chain, chain[1:])))


def expand_vertex(g: Graph, v: int, length: int, positions: Sequence[int] = None) -> Graph:
    """Blow ``v`` up into a circuit of ``length`` vertices.

    The circuit keeps ``v`` at position 0; the i-th neighbour of ``v`` (sorted)
    is reattached to circuit position ``positions[i]``.
    """
    nbrs = g.neighbors(v)
    if positions is None:
        positions = range(len(nbrs))
    if len(positions) != len(nbrs) or len(set(positions)) != len(positions) or max(positions) >= length:
        raise ValueError("positions must pick distinct circuit slots, one per neighbour")
    base = g.vertices[-1] + 1
    ring = [v] + list(range(base, base + length - 1))
    es = [e for e in g.edges if v not in e]
    es += [(ring[i], ring[(i + 1) % length]) for i in range(length)]
    es += [(ring[p], w) for p, w in zip(positions, nbrs)]
    return Graph(list(g.vertices) + ring[1:], es)


def triangle_expanded_k33(v: int = 0) -> Graph:
    return expand_vertex(k33(), v, 3)


def pentagon_expanded_k33(v: int = 0, positions=(0, 1, 2)) -> Graph:
    return expand_vertex(k33(), v, 5, positions)


def builtin_catalog() -> Dict[str, Graph]:
    k4, c4 = complete(4), cycle(4)
    return {
        "k2": complete(2),
        "c4": c4,
        "c6": cycle(6),
        "k4": k4,
        "k33": k33(),
        "petersen": petersen(),
        "tri-expanded-k33": triangle_expanded_k33(),
        "pent-expanded-k33": pentagon_expanded_k33(),
        "splice-k4-k4": prism(),
        "splice-k4-k33": splice(k4, k33(), 3, 0).graph,
        "glue-k4-k4-keep": glue(k4, k4, (0, 1), (0, 1), True).graph,
        "glue-k4-k4-drop": glue(k4, k4, (0, 1), (0, 1), False).graph,
        "glue-c4-c4-drop": glue(c4, c4, (0, 1), (0, 1), False).graph,
        "glue-k4-c4-keep": glue(k4, c4, (0, 1), (0, 1), True).graph,
    }


def load_catalog() -> Dict[str, Graph]:
    """Read the edge-list files shipped in ``pflab/catalog``."""
    out = {}
    root = resources.files("pflab") / "catalog"
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".edges"):
            with resources.as_file(entry) as p:
                out[entry.name[: -len(".edges")]] = read_graph(p)
    return out


def write_catalog(directory) -> None:
    from pathlib import Path

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name, g in builtin_catalog().items():
        (d / f"{name}.edges").write_text(g.to_text(), encoding="utf-8")
