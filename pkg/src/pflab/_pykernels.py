"""Pure-Python reference implementations of the hot kernels.

Signatures mirror ``_ckernels``; ``pflab.kernels`` picks one at import.
"""


def enumerate_matchings(n, nbrs, cap):
    """Perfect matchings as edge bitmasks, lexicographic by sorted edge list.

    ``nbrs[v]`` lists ``(w, edge_index)`` sorted by ``w``. Branches on the
    lowest uncovered vertex and prunes when some uncovered vertex has no
    uncovered neighbour. Stops after ``cap + 1`` results so the caller can
    detect overflow.
    """
    if n == 0:
        return [0]
    if n % 2:
        return []
    full = (1 << n) - 1
    nmask = [0] * n
    for v in range(n):
        for w, _ in nbrs[v]:
            nmask[v] |= 1 << w
    out = []

    def rec(covered, acc):
        if covered == full:
            out.append(acc)
            return len(out) > cap
        free = full & ~covered
        f = free
        while f:
            low = f & -f
            if not nmask[low.bit_length() - 1] & free:
                return False
            f ^= low
        v = (free & -free).bit_length() - 1
        for w, ei in nbrs[v]:
            if free >> w & 1:
                if rec(covered | (1 << v) | (1 << w), acc | (1 << ei)):
                    return True
        return False

    rec(0, 0)
    return out


def orientation_sweep(factor_masks, base_parities, lo, hi):
    """First orientation index in ``[lo, hi)`` giving every factor the same
    sign parity, or -1.

    Reversing edge ``e`` transposes two entries of a factor's vertex
    sequence iff ``e`` lies in the factor, so the sign parity of factor ``j``
    under orientation ``o`` is ``popcount(o & mask_j) + base_j`` mod 2.
    """
    if not factor_masks:
        return lo if lo < hi else -1
    pairs = list(zip(factor_masks, base_parities))
    m0, b0 = pairs[0]
    rest = pairs[1:]
    for o in range(lo, hi):
        p0 = (bin(o & m0).count("1") + b0) & 1
        for mj, bj in rest:
            if (bin(o & mj).count("1") + bj) & 1 != p0:
                break
        else:
            return o
    return -1
