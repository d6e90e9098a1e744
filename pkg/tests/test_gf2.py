import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from pflab import gf2


def brute_rank(rows, width):
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return len(span).bit_length() - 1


def test_rank_and_span_examples():
    assert gf2.rank([0b011, 0b110, 0b101]) == 2
    basis = gf2.row_basis([0b011, 0b110, 0b101])
    assert gf2.in_span(0b101, basis) and not gf2.in_span(0b100, basis)
    assert gf2.rank([]) == 0 and gf2.rank([0, 0]) == 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 255), max_size=8))
def test_rank_matches_span_size(rows):
    assert gf2.rank(rows) == brute_rank(rows, 8)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 63), st.integers(0, 1)), max_size=8))
def test_solve_is_sound_and_complete(system):
    rows = [r for r, _ in system]
    rhs = [b for _, b in system]
    x, combo = gf2.solve(rows, rhs)
    feasible = any(all(bin(r & cand).count("1") % 2 == b for r, b in system) for cand in range(64))
    if x is not None:
        assert feasible
        assert all(bin(r & x).count("1") % 2 == b for r, b in system)
    else:
        assert not feasible and combo
        acc, par = 0, 0
        for j in combo:
            acc ^= rows[j]
            par ^= rhs[j]
        assert acc == 0 and par == 1


def test_solve_free_variables_are_zero():
    x, _ = gf2.solve([0b01], [1])
    assert x == 0b01
    rng = random.Random(3)
    for _ in range(50):
        rows = [rng.getrandbits(10) for _ in range(6)]
        rhs = [rng.getrandbits(1) for _ in rows]
        x, combo = gf2.solve(rows, rhs)
        assert (x is None) != (combo is None)
    assert list(itertools.islice(iter([gf2.solve([], [])[0]]), 1)) == [0]
