"""Exhaustive graph families shared by the test modules, built once per process."""
from functools import lru_cache

from pflab.oracles import all_two_ear_instances, one_extendible_graphs

# criterion number -> reported line, filled by test_acceptance
ACCEPTANCE_LINES = {}


@lru_cache(maxsize=None)
def one_extendible_upto8():
    return tuple(one_extendible_graphs(8, 28))


@lru_cache(maxsize=None)
def bipartite_upto10():
    return tuple(one_extendible_graphs(10, 25, bipartite=True))


@lru_cache(maxsize=None)
def ten_vertex_sparse():
    return tuple(g for g in one_extendible_graphs(10, 12) if g.n == 10)


@lru_cache(maxsize=None)
def upto12_edges():
    return tuple(one_extendible_graphs(12, 12))


@lru_cache(maxsize=None)
def two_ear_corpus():
    return tuple(all_two_ear_instances(10, 16))


def small(max_edges):
    return [g for g in one_extendible_upto8() if g.m <= max_edges and g.n >= 2]
