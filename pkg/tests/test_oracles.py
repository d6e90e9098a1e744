import networkx as nx
import pytest

from pflab.catalog import builtin_catalog, complete, cycle, k33, petersen
from pflab.engine import decide
from pflab.errors import TooLarge
from pflab.graph import Graph
from pflab.matchings import is_one_extendible
from pflab.oracles import (
    InstanceRecipe,
    all_two_ear_instances,
    brute_force_pfaffian,
    exhaustive_decompositions,
    generate_two_ear_instances,
    naive_factors,
    one_extendible_graphs,
    two_connected_graphs,
)
from pflab.witness import class_condition_violation


def test_brute_force_examples():
    assert brute_force_pfaffian(k33()) is False
    assert brute_force_pfaffian(petersen()) is False
    assert brute_force_pfaffian(cycle(4)) is True
    with pytest.raises(TooLarge):
        brute_force_pfaffian(Graph(range(8), [(a, b) for a in range(8) for b in range(a + 1, 8)]))


def test_brute_force_single_thread_matches_parallel():
    g = builtin_catalog()["tri-expanded-k33"]
    assert brute_force_pfaffian(g, threads=1) == brute_force_pfaffian(g, threads=4) is False


def test_naive_factors():
    assert len(naive_factors(list(k33().edges))) == 6
    assert naive_factors([(0, 1), (1, 2)]) == []


def test_exhaustive_decomposition_examples():
    assert exhaustive_decompositions(cycle(6)) == 0
    assert exhaustive_decompositions(complete(4)) == 1
    assert exhaustive_decompositions(k33()) == 0
    assert exhaustive_decompositions(complete(2)) == 0
    with pytest.raises(TooLarge):
        exhaustive_decompositions(complete(7))


def _atlas_counts(n):
    general = bipartite = 0
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() != n or not nx.is_connected(h):
            continue
        g = Graph(range(n), h.edges())
        if is_one_extendible(g):
            general += 1
            bipartite += nx.is_bipartite(h)
    return general, bipartite


def test_generator_complete_on_six_vertices():
    ours = [g for g in one_extendible_graphs(6, 15) if g.n == 6]
    ours_bip = [g for g in one_extendible_graphs(6, 9, bipartite=True) if g.n == 6]
    assert (len(ours), len(ours_bip)) == _atlas_counts(6) == (24, 4)
    assert _atlas_counts(4) == (len([g for g in one_extendible_graphs(4, 6) if g.n == 4]), 1)


def test_two_connected_graphs_small():
    # 2-connected graphs on at most 4 vertices: C3, C4, C4 plus a chord, K4.
    assert len(two_connected_graphs(4, 6)) == 4


def test_generator_is_deterministic():
    r = InstanceRecipe(seed=7, count=5)
    a = [(i.g.edges, i.e1, i.e2) for i in generate_two_ear_instances(r)]
    b = [(i.g.edges, i.e1, i.e2) for i in generate_two_ear_instances(r)]
    assert a == b and len(a) == 5


def test_generator_instances_are_valid_and_labelled():
    labels = set()
    for seed in range(40):
        for inst in generate_two_ear_instances(InstanceRecipe(seed=seed, count=2)):
            inst.validate()
            assert inst.g.m <= 16
            assert inst.class_ok == (class_condition_violation(inst) is None)
            labels.add(inst.class_ok)
    assert labels == {True, False}


def test_generator_catalog_and_bounds():
    (k4,) = generate_two_ear_instances(InstanceRecipe(kind="catalog"))
    assert k4.g == complete(4) and k4.k == cycle(4) and k4.class_ok is None
    assert list(generate_two_ear_instances(InstanceRecipe(max_vertices=3))) == []


def test_exhaustive_instances_small():
    insts = list(all_two_ear_instances(6, 10))
    assert insts and all(i.class_ok is not None for i in insts)
    assert any(i.g == complete(4) for i in insts)


def test_oracle_engine_agreement_on_seeded_instances():
    n = 0
    for inst in generate_two_ear_instances(InstanceRecipe(seed=2024, count=500)):
        assert decide(inst.g).is_pfaffian == brute_force_pfaffian(inst.g)
        assert decide(inst.k).is_pfaffian == brute_force_pfaffian(inst.k)
        n += 1
    assert n == 500
