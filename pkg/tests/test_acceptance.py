"""The thirteen acceptance criteria, one test each.

Every criterion reports one PASS/FAIL line. Under pytest the lines are
collected into the terminal summary; run this file directly to print them:

    python3 tests/test_acceptance.py [N ...]

Criterion 8 over every 1-extendible graph on 10 vertices is opt-in with
PFLAB_FULL=1; the default run covers the families named in its report line.
"""
import io
import itertools
import json
import os
import random
import sys
import time
from collections import Counter

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import families  # noqa: E402
from pflab import cli  # noqa: E402
from pflab.catalog import builtin_catalog, complete, expand_vertex, k33, petersen  # noqa: E402
from pflab.certificates import certificate_from_json  # noqa: E402
from pflab.decomposition import (  # noqa: E402
    alternating_space,
    brick_decompose,
    cycle_space_dim,
    ear_decomposition,
    min_two_ear_count,
    two_ear_lower_bound,
)
from pflab.engine import (  # noqa: E402
    EVEN,
    Orientation,
    all_signs_equal,
    clockwise_parity,
    decide,
    find_pfaffian_orientation,
    lift_intractable_set,
    verify_intractable_set,
)
from pflab.graph import Circuit, circuits_of, contract, glue, is_bipartite, splice  # noqa: E402
from pflab.matchings import alternating_circuits, find_one_factor, is_tight_cut  # noqa: E402
from pflab.oracles import (  # noqa: E402
    MAX_ORIENTATION_EDGES,
    InstanceRecipe,
    brute_force_pfaffian,
    exhaustive_decompositions,
    generate_two_ear_instances,
    one_extendible_graphs,
)
from pflab.witness import (  # noqa: E402
    cascade_violations,
    find_even_k33_with_complement,
    lemma4_check,
    normalize_trace,
    select_cascade,
    theorem5_decide,
    trace_law_violations,
    trace_of,
)

CRITERIA = {}


def criterion(n, title):
    def register(fn):
        CRITERIA[n] = (title, fn)
        return fn

    return register


def run_criterion(n):
    title, fn = CRITERIA[n]
    t0 = time.perf_counter()
    try:
        detail = fn()
    except Exception as exc:
        line = f"criterion {n:2d}: FAIL  {title} ({type(exc).__name__}: {exc})"
        families.ACCEPTANCE_LINES[n] = line
        print(line)
        raise
    line = f"criterion {n:2d}: PASS  {title} ({detail}; {time.perf_counter() - t0:.1f} s)"
    families.ACCEPTANCE_LINES[n] = line
    print(line)


def naive_signs_equal(g, bits):
    """Sign of every 1-factor as the parity of the permutation (t1 h1 t2 h2 ...)."""
    o = Orientation(g, bits)
    signs = set()
    pos = {v: i for i, v in enumerate(g.vertices)}
    for f in _factors(g):
        seq = [pos[v] for e in sorted(f) for v in o.arc(e)]
        inv = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
        signs.add(inv & 1)
    return len(signs) <= 1


def _factors(g):
    from pflab.oracles import naive_factors

    return naive_factors(list(g.edges))


# 1 -----------------------------------------------------------------------------

@criterion(1, "K3,3 check: non-Pfaffian, intractable set verifies, oracle agrees")
def c1():
    g = k33()
    t0 = time.perf_counter()
    path = os.path.join(os.path.dirname(cli.__file__), "catalog", "k33.edges")
    buf = io.StringIO()
    code = cli.main(["check", "--json", path], stream=buf)
    data = json.loads(buf.getvalue())
    cert = certificate_from_json(g, data)
    assert code == 1 and data["verdict"] == "non-pfaffian"
    assert verify_intractable_set(g, cert.intractable_set)
    assert brute_force_pfaffian(g) is False
    elapsed = time.perf_counter() - t0
    assert elapsed < 5, f"{elapsed:.1f} s"
    return f"exit 1, {len(cert.intractable_set.circuits)} circuits in the set"


# 2 -----------------------------------------------------------------------------

@criterion(2, "Petersen: non-Pfaffian, dim C - dim A = 2")
def c2():
    g = petersen()
    t0 = time.perf_counter()
    cert = decide(g)
    assert not cert.is_pfaffian and verify_intractable_set(g, cert.intractable_set)
    dc, da = cycle_space_dim(g), alternating_space(g).dim
    assert dc - da == 2, (dc, da)
    assert brute_force_pfaffian(g) is False
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    return f"dim C = {dc}, dim A = {da}, oracle non-Pfaffian"


# 3 -----------------------------------------------------------------------------

@criterion(3, "K4: Pfaffian, dim C - dim A = 1, min 2-ear count 1")
def c3():
    g = complete(4)
    cert = decide(g)
    assert cert.is_pfaffian and all_signs_equal(cert.orientation)
    assert brute_force_pfaffian(g) is True
    dc, da = cycle_space_dim(g), alternating_space(g).dim
    assert dc - da == 1
    assert min_two_ear_count(g) == 1
    return f"dim C = {dc}, dim A = {da}, min_two_ear_count = 1"


# 4 -----------------------------------------------------------------------------

@criterion(4, "bipartite equivalence: Pfaffian iff no even K3,3 subdivision with complement")
def c4():
    t0 = time.perf_counter()
    graphs = families.bipartite_upto10()
    non = 0
    for g in graphs:
        assert g.is_connected() and is_bipartite(g)
        verdict = find_pfaffian_orientation(g).is_pfaffian
        w = find_even_k33_with_complement(g)
        assert verdict == (w is None), g.edges
        if w is not None:
            assert w.verify(g)
            non += 1
    assert time.perf_counter() - t0 < 1800
    return f"{len(graphs)} graphs up to 10 vertices, {non} non-Pfaffian, all agree"


# 5 -----------------------------------------------------------------------------

def _orientation_sample(rng, g):
    """Half random, half switches of a Pfaffian orientation (when one exists)."""
    bits = rng.getrandbits(g.m)
    if rng.random() < 0.5:
        cert = decide(g)
        if cert.is_pfaffian:
            bits = cert.orientation.bits
            for v in g.vertices:
                if rng.random() < 0.5:
                    for e in g.incident(v):
                        bits ^= 1 << g.edge_index[e]
            if rng.random() < 0.3:
                bits ^= 1 << rng.randrange(g.m)
    return bits


@criterion(5, "equal signs iff every f-alternating circuit is clockwise odd")
def c5():
    rng = random.Random(5)
    pool = [g for g in families.small(14) if g.m >= 2]
    tally = Counter()
    for _ in range(500):
        g = rng.choice(pool)
        bits = _orientation_sample(rng, g)
        o = Orientation(g, bits)
        f = find_one_factor(g)
        odd_all = all(clockwise_parity(o, a.circuit) != EVEN for a in alternating_circuits(g, f))
        eq = all_signs_equal(o)
        assert eq == odd_all == naive_signs_equal(g, bits), (g.edges, bits)
        tally[eq] += 1
    assert tally[True] and tally[False]
    return f"500 pairs, {tally[True]} sign-equal, {tally[False]} not"


# 6 -----------------------------------------------------------------------------

@criterion(6, "parity law for consanguineous pairs")
def c6():
    rng = random.Random(6)
    pool = []
    for g in families.small(14):
        f = find_one_factor(g)
        if f is not None and len(alternating_circuits(g, f)) >= 2:
            pool.append((g, f))
    tally = Counter()
    for _ in range(500):
        g, f = rng.choice(pool)
        a1, a2 = rng.sample([a.circuit for a in alternating_circuits(g, f)], 2)
        o = Orientation(g, rng.getrandbits(g.m))
        opposite = clockwise_parity(o, a1) != clockwise_parity(o, a2)
        parts = circuits_of(a1.edges ^ a2.edges)
        assert all(not p.is_odd for p in parts)
        evens = sum(1 for p in parts if clockwise_parity(o, p) == EVEN)
        assert opposite == (evens % 2 == 1), (g.edges, a1, a2)
        tally[opposite] += 1
    assert tally[True] and tally[False]
    return f"500 pairs, {tally[True]} opposite parity, {tally[False]} equal"


# 7 -----------------------------------------------------------------------------

@criterion(7, "odd-circuit lift of the K3,3 intractable set")
def c7():
    base = decide(k33()).intractable_set
    done = 0
    for v in range(6):
        for length in (3, 5):
            g = expand_vertex(k33(), v, length, (0, 1, 2))
            ring = [v] + list(range(6, 6 + length - 1))
            x = Circuit.from_cycle(ring)
            assert contract(g, ring).graph.edge_set == k33().edge_set
            lifted = lift_intractable_set(g, x, base)
            assert verify_intractable_set(g, lifted)
            assert g.m <= MAX_ORIENTATION_EDGES and brute_force_pfaffian(g) is False
            done += 1
    return f"{done} expansions (triangle and pentagon at all 6 vertices), oracle non-Pfaffian on all"


# 8 -----------------------------------------------------------------------------

def _check_ears(g):
    d = ear_decomposition(g)
    d.validate()
    assert all(len(s.ears) in (1, 2) for s in d.steps)
    assert d.ear_count == cycle_space_dim(g)
    if is_bipartite(g):
        assert d.two_ear_steps == 0


@criterion(8, "ear decompositions: 1 or 2 ears per step, total = dim C, bipartite single ears")
def c8():
    scopes = [
        ("all up to 8 vertices", families.one_extendible_upto8()),
        ("bipartite up to 10 vertices", families.bipartite_upto10()),
        ("10 vertices with at most 12 edges", families.ten_vertex_sparse()),
    ]
    if os.environ.get("PFLAB_FULL"):
        scopes.append(("all on 10 vertices", [g for g in one_extendible_graphs(10, 45) if g.n == 10]))
    counts = []
    for name, graphs in scopes:
        for g in graphs:
            _check_ears(g)
        counts.append(f"{len(graphs)} {name}")
    scope = "" if os.environ.get("PFLAB_FULL") else "; full 10-vertex sweep needs PFLAB_FULL=1"
    return ", ".join(counts) + scope


# 9 -----------------------------------------------------------------------------

@criterion(9, "minimum 2-ear count equals dim C - dim A")
def c9():
    graphs = families.upto12_edges()
    pos = 0
    for g in graphs:
        lb = two_ear_lower_bound(g)
        assert exhaustive_decompositions(g) == lb, g.edges
        pos += lb > 0
    return f"{len(graphs)} graphs with at most 12 edges, {pos} need 2-ear steps"


# 10 ----------------------------------------------------------------------------

@criterion(10, "splices recovered from brick decompositions are tight")
def c10():
    cat = builtin_catalog()
    graphs = [(name, g) for name, g in cat.items() if name != "petersen"]
    graphs += [(f"small#{i}", g) for i, g in enumerate(families.small(12)) if g.n >= 4]
    cuts = 0
    for name, g in graphs:
        for host, cut in brick_decompose(g).barrier_cuts():
            assert is_tight_cut(host, cut), (name, cut)
            cuts += 1
    prism_bricks = brick_decompose(cat["splice-k4-k4"]).bricks
    assert len(prism_bricks) == 1
    with_cuts = sum(1 for name, g in cat.items() if brick_decompose(g).barrier_cuts())
    return f"{cuts} splices over {len(graphs)} graphs ({with_cuts} catalog graphs have barrier steps), all tight"


# 11 ----------------------------------------------------------------------------

def _agree(g, expected):
    assert decide(g).is_pfaffian is expected, g.edges
    if g.m <= MAX_ORIENTATION_EDGES:
        assert brute_force_pfaffian(g) is expected, g.edges
        return 1
    return 0


@criterion(11, "closure laws for gluing and splicing")
def c11():
    cat = builtin_catalog()
    pfaffian = {n: g for n, g in cat.items() if decide(g).is_pfaffian}
    checked = oracle = 0
    for (hn, h), (kn, k) in itertools.product(pfaffian.items(), repeat=2):
        for keep in (True, False):
            oracle += _agree(glue(h, k, h.edges[0], k.edges[0], keep).graph, True)
            checked += 1
    bad = k33()
    for name, h in cat.items():
        if h.m > 1:
            for x in h.edges:
                for keep in (True, False):
                    oracle += _agree(glue(h, bad, x, bad.edges[0], keep).graph, False)
                    checked += 1
        for v in h.vertices:
            if h.degree(v) != 3:
                continue
            for perm in itertools.permutations(bad.neighbors(0)):
                oracle += _agree(splice(h, bad, v, 0, dict(zip(h.neighbors(v), perm))).graph, False)
                checked += 1
    return f"{checked} compositions, {oracle} also confirmed by the orientation oracle"


# 12 ----------------------------------------------------------------------------

def seeded_instances(count=200, max_edges=16):
    out, seed = [], 0
    while len(out) < count:
        for inst in generate_two_ear_instances(InstanceRecipe(seed=seed, count=1, max_edges=max_edges)):
            if inst.class_ok:
                out.append(inst)
        seed += 1
    return out


@criterion(12, "2-ear decision agrees with the orientation oracle, witnesses verify")
def c12():
    t0 = time.perf_counter()
    routes = Counter()
    for inst in seeded_instances():
        assert inst.g.m <= 16
        cert = theorem5_decide(inst)
        assert cert.is_pfaffian is brute_force_pfaffian(inst.g), inst.g.edges
        if cert.is_pfaffian:
            assert all_signs_equal(cert.orientation)
        else:
            assert cert.witness.verify(inst.g)
        routes[cert.meta.get("route")] += 1
    assert time.perf_counter() - t0 < 3600
    return "200 instances, routes " + ", ".join(f"{k} {v}" for k, v in sorted(routes.items()))


# 13 ----------------------------------------------------------------------------

@criterion(13, "cascade invariants on every instance that reaches the cascade")
def c13():
    corpus = [i for i in families.two_ear_corpus() if i.class_ok] + seeded_instances()
    reached = 0
    traces = Counter()
    extractions = Counter()
    for inst in corpus:
        cert = theorem5_decide(inst)
        route = cert.meta.get("route")
        assert route != "direct-search", cert.meta.get("machinery_error")
        if route != "cascade":
            continue
        reached += 1
        c = select_cascade(inst, find_pfaffian_orientation(inst.k).orientation)
        assert cascade_violations(c) == []
        fr = c.frame
        assert all(lemma4_check(inst, m.circuit, fr.a, fr.f) for m in c.members)
        raw = trace_of(c)
        assert trace_law_violations(raw) == []
        norm = trace_of(normalize_trace(inst, c))
        assert trace_law_violations(norm) == []
        assert len(norm.reduced) % 2 == 1
        assert cert.meta["cascade"]["odd_reduced"] and cert.witness.verify(inst.g)
        traces[raw.text] += 1
        extractions[cert.meta["cascade"]["extraction"]] += 1
    assert reached > 0
    shapes = ", ".join(f"{t}:{n}" for t, n in sorted(traces.items()))
    how = ", ".join(f"{k} {v}" for k, v in sorted(extractions.items()))
    return f"{reached} of {len(corpus)} instances reach the cascade, zero failures; traces {shapes}; witnesses from {how}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    run_criterion(n)


if __name__ == "__main__":
    wanted = [int(a) for a in sys.argv[1:]] or sorted(CRITERIA)
    failed = 0
    for n in wanted:
        try:
            run_criterion(n)
        except Exception:
            failed += 1
    sys.exit(1 if failed else 0)
