"""Compare the compiled and pure-Python kernels on identical inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import sys
import timeit

from pflab import _pykernels
from pflab.catalog import builtin_catalog
from pflab.graph import edge
from pflab.oracles import _inversion_parity, naive_factors

try:
    from pflab import _ckernels
except ImportError:
    _ckernels = None


CATALOG = builtin_catalog()


def matching_input(g):
    pos = {v: i for i, v in enumerate(g.vertices)}
    idx = g.edge_index
    nbrs = [[(pos[w], idx[edge(v, w)]) for w in g.adjacency[v]] for v in g.vertices]
    return g.n, nbrs


def sweep_input(g):
    edges = list(g.edges)
    idx = {e: i for i, e in enumerate(edges)}
    factors = naive_factors(edges)
    seqs = [[v for e in sorted(f) for v in e] for f in factors]
    base = [_inversion_parity(s, seqs[0]) for s in seqs]
    masks = [sum(1 << idx[e] for e in f) for f in factors]
    return masks, base, 1 << (g.m - 1)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1

    rows = []
    for name in ("k33", "petersen", "splice-k4-k33", "pent-expanded-k33"):
        n, nbrs = matching_input(CATALOG[name])
        assert _pykernels.enumerate_matchings(n, nbrs, 10**6) == _ckernels.enumerate_matchings(n, nbrs, 10**6)
        py = best(lambda: _pykernels.enumerate_matchings(n, nbrs, 10**6), args.repeat)
        cy = best(lambda: _ckernels.enumerate_matchings(n, nbrs, 10**6), args.repeat)
        rows.append(("enumerate_matchings", name, py, cy))
    # Non-Pfaffian graphs force a full sweep of 2^(m-1) orientations.
    for name in ("k33", "tri-expanded-k33", "petersen"):
        masks, base, hi = sweep_input(CATALOG[name])
        assert _pykernels.orientation_sweep(masks, base, 0, hi) == _ckernels.orientation_sweep(masks, base, 0, hi)
        py = best(lambda: _pykernels.orientation_sweep(masks, base, 0, hi), args.repeat)
        cy = best(lambda: _ckernels.orientation_sweep(masks, base, 0, hi), args.repeat)
        rows.append(("orientation_sweep", name, py, cy))

    print(f"{'kernel':<20} {'graph':<18} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for kernel, name, py, cy in rows:
        print(f"{kernel:<20} {name:<18} {py * 1e3:>10.3f} {cy * 1e3:>10.3f} {py / cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
