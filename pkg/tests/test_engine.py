import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import families
from pflab.catalog import builtin_catalog, complete, cycle, k33, pentagon_expanded_k33, petersen, triangle_expanded_k33
from pflab.engine import (
    EVEN,
    ODD,
    Certificate,
    IntractableSet,
    Orientation,
    all_signs_equal,
    clockwise_parity,
    decide,
    factor_sign,
    find_pfaffian_orientation,
    lift_intractable_set,
    verify_intractable_set,
)
from pflab.errors import InvalidInput, NoFactor, NotAFactor, NotOddCircuit, NotOneExtendible, OddCircuit
from pflab.graph import Circuit, Graph, circuits_of
from pflab.matchings import alternating_circuits, enumerate_one_factors, find_one_factor
from pflab.oracles import brute_force_orientation, brute_force_pfaffian

C4_RING = Circuit.from_cycle([0, 1, 2, 3])


def cyclic_c4():
    return Orientation.from_arcs(cycle(4), [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_orientation_bits_convention():
    o = cyclic_c4()
    assert o.arc((0, 3)) == (3, 0) and o.arc((0, 1)) == (0, 1)
    assert o.bits == 1 << cycle(4).edge_index[(0, 3)]
    assert Orientation.from_arcs(cycle(4), o.arcs()) == o
    assert o.reversed((0, 3)).bits == 0
    with pytest.raises(InvalidInput):
        Orientation.from_arcs(cycle(4), [(0, 1)])
    with pytest.raises(InvalidInput):
        Orientation.from_arcs(cycle(4), [(0, 2), (0, 1), (1, 2), (2, 3)])


def test_transfer_keeps_shared_directions():
    g = complete(4)
    o = Orientation.from_arcs(cycle(4), [(1, 0), (1, 2), (3, 2), (3, 0)])
    t = o.transfer(g)
    assert all(t.arc(e) == o.arc(e) for e in cycle(4).edges)
    assert t.arc((0, 2)) == (0, 2)


def test_clockwise_parity_examples():
    o = cyclic_c4()
    assert clockwise_parity(o, C4_RING) == EVEN
    assert clockwise_parity(o.reversed((0, 1)), C4_RING) == ODD
    # K3,3 with every edge directed from side M = {0,1,2} to side N.
    g = k33()
    o = Orientation(g, 0)
    hexagon = Circuit.from_cycle([0, 3, 1, 4, 2, 5])
    assert clockwise_parity(o, hexagon) == ODD
    with pytest.raises(OddCircuit):
        clockwise_parity(Orientation(complete(4), 0), Circuit.from_cycle([0, 1, 2]))


def test_factor_sign_examples():
    o = cyclic_c4()
    f, h = enumerate_one_factors(cycle(4))
    assert factor_sign(o, f, f) == 1
    assert factor_sign(o, f, h) == -1
    with pytest.raises(NotAFactor):
        factor_sign(o, f, [(0, 1)])


def test_k33_signs_never_all_equal():
    g = k33()
    for bits in range(1 << g.m):
        assert not all_signs_equal(Orientation(g, bits))


def test_all_signs_equal_small_cases():
    assert all_signs_equal(Orientation(complete(2), 0))
    assert all_signs_equal(Orientation(complete(2), 1))
    for bits in range(16):
        o = Orientation(cycle(4), bits)
        assert all_signs_equal(o) == (clockwise_parity(o, C4_RING) == ODD)
    with pytest.raises(NoFactor):
        all_signs_equal(Orientation(cycle(5), 0))


def test_find_pfaffian_orientation_examples():
    cert = find_pfaffian_orientation(cycle(4))
    assert cert.is_pfaffian and clockwise_parity(cert.orientation, C4_RING) == ODD
    cert = find_pfaffian_orientation(k33())
    assert cert.kind == "intractable" and verify_intractable_set(k33(), cert.intractable_set)
    assert not find_pfaffian_orientation(petersen()).is_pfaffian
    assert find_pfaffian_orientation(complete(4)).is_pfaffian
    assert brute_force_pfaffian(complete(4))
    with pytest.raises(NotOneExtendible):
        find_pfaffian_orientation(Graph(range(4), [(0, 1), (1, 2), (2, 3)]))


def test_certificate_verdicts():
    c = Certificate("pfaffian", cycle(4), orientation=cyclic_c4())
    assert c.verdict == "pfaffian" and c.is_pfaffian
    assert Certificate("witness", k33()).verdict == "non-pfaffian"


def test_verify_intractable_set_rejections():
    g = k33()
    s = find_pfaffian_orientation(g).intractable_set
    single = IntractableSet(s.factor, s.circuits[:1])
    assert not verify_intractable_set(g, single)
    assert not verify_intractable_set(g, IntractableSet(s.factor, ()))
    assert not verify_intractable_set(g, IntractableSet(s.factor, s.circuits + s.circuits[:1]))


def test_decide_handles_non_extendible_graphs():
    g = Graph(range(6), list(cycle(4).edges) + [(3, 4), (4, 5)])
    cert = decide(g)
    assert cert.is_pfaffian and all_signs_equal(cert.orientation)
    assert decide(cycle(5)).meta["reason"] == "no 1-factor"
    two = Graph(range(12), list(k33().edges) + [(a + 6, b + 6) for a, b in k33().edges] + [(0, 6)])
    cert = decide(two)
    assert not cert.is_pfaffian and verify_intractable_set(two, cert.intractable_set)


@pytest.mark.parametrize("name", sorted(builtin_catalog()))
def test_engine_agrees_with_oracle_on_catalog(name):
    g = builtin_catalog()[name]
    cert = decide(g)
    assert cert.is_pfaffian == brute_force_pfaffian(g)
    if cert.is_pfaffian:
        assert all_signs_equal(cert.orientation)
    else:
        assert verify_intractable_set(g, cert.intractable_set)


def test_oracle_orientation_is_pfaffian():
    bits = brute_force_orientation(complete(4))
    assert all_signs_equal(Orientation(complete(4), bits))


def test_engine_agrees_with_oracle_exhaustively():
    for g in families.small(14):
        cert = find_pfaffian_orientation(g)
        assert cert.is_pfaffian == brute_force_pfaffian(g), g.edges
        if not cert.is_pfaffian:
            assert verify_intractable_set(g, cert.intractable_set)


def test_f_alternating_equivalence_every_orientation():
    for g in families.small(9):
        f = find_one_factor(g)
        cs = [a.circuit for a in alternating_circuits(g, f)]
        for bits in range(1 << g.m):
            o = Orientation(g, bits)
            assert all_signs_equal(o) == all(clockwise_parity(o, c) == ODD for c in cs)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_parity_law_for_consanguineous_pairs(data):
    g = data.draw(st.sampled_from([h for h in families.small(12) if h.m >= 6]))
    f = data.draw(st.sampled_from(enumerate_one_factors(g)))
    cs = [a.circuit for a in alternating_circuits(g, f)]
    if len(cs) < 2:
        return
    a1, a2 = data.draw(st.lists(st.sampled_from(cs), min_size=2, max_size=2, unique=True))
    o = Orientation(g, data.draw(st.integers(0, (1 << g.m) - 1)))
    evens = sum(1 for p in circuits_of(a1.edges ^ a2.edges) if clockwise_parity(o, p) == EVEN)
    assert (clockwise_parity(o, a1) != clockwise_parity(o, a2)) == (evens % 2 == 1)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_intractable_parity_is_orientation_independent(data):
    g = data.draw(st.sampled_from([k33(), petersen(), triangle_expanded_k33()]))
    s = find_pfaffian_orientation(g).intractable_set
    o = Orientation(g, data.draw(st.integers(0, (1 << g.m) - 1)))
    assert sum(1 for c in s.circuits if clockwise_parity(o, c) == EVEN) % 2 == 1


@pytest.mark.parametrize("v,length", list(itertools.product(range(6), (3, 5))))
def test_lift_intractable_set(v, length):
    g = triangle_expanded_k33(v) if length == 3 else pentagon_expanded_k33(v)
    x = Circuit.from_cycle([v] + list(range(6, 6 + length - 1)))
    base = find_pfaffian_orientation(k33()).intractable_set
    lifted = lift_intractable_set(g, x, base)
    assert verify_intractable_set(g, lifted)
    e0 = base.factor.edge_at(v)
    for c, d in zip(base.circuits, lifted.circuits):
        if e0 not in c.edges:
            assert c == d


def test_lift_rejects_bad_input():
    g = triangle_expanded_k33()
    base = find_pfaffian_orientation(k33()).intractable_set
    with pytest.raises(NotOddCircuit):
        lift_intractable_set(g, Circuit.from_cycle([0, 6, 7, 1]), base)
    bogus = IntractableSet(base.factor, base.circuits[:1])
    with pytest.raises(InvalidInput):
        lift_intractable_set(g, Circuit.from_cycle([0, 6, 7]), bogus)
