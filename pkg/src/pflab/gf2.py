"""GF(2) linear algebra on int bitsets (bit i = column i)."""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple


def rank(rows: Sequence[int]) -> int:
    return len(row_basis(rows))


def row_basis(rows: Sequence[int]) -> List[int]:
    """Echelon basis of the row space; pivots are the lowest set bits."""
    basis: List[int] = []
    pivots: List[int] = []
    for r in rows:
        for b, p in zip(basis, pivots):
            if r >> p & 1:
                r ^= b
        if r:
            p = (r & -r).bit_length() - 1
            for i, b in enumerate(basis):
                if b >> p & 1:
                    basis[i] = b ^ r
            basis.append(r)
            pivots.append(p)
    return basis


def in_span(vec: int, basis: Sequence[int]) -> bool:
    for b in basis:
        p = (b & -b).bit_length() - 1
        if vec >> p & 1:
            vec ^= b
    return vec == 0


def solve(rows: Sequence[int], rhs: Sequence[int]) -> Tuple[Optional[int], Optional[List[int]]]:
    """Solve ``rows[i] . x = rhs[i]`` over GF(2).

    Returns ``(x, None)`` with free variables set to 0, or ``(None, combo)``
    where ``combo`` lists row indices whose left sides cancel but whose right
    sides sum to 1.
    """
    # each pivot row carries (lhs, rhs, combination bitset over input rows)
    piv: List[Tuple[int, int, int, int]] = []
    for i, (r, b) in enumerate(zip(rows, rhs)):
        combo = 1 << i
        b &= 1
        for lhs, pb, pc, p in piv:
            if r >> p & 1:
                r ^= lhs
                b ^= pb
                combo ^= pc
        if r:
            piv.append((r, b, combo, (r & -r).bit_length() - 1))
        elif b:
            return None, [j for j in range(len(rows)) if combo >> j & 1]
    # back substitution, highest pivot first
    x = 0
    for lhs, b, _, p in sorted(piv, key=lambda t: -t[3]):
        rest = lhs & ~(1 << p)
        val = b ^ (bin(rest & x).count("1") & 1)
        if val:
            x |= 1 << p
    return x, None
