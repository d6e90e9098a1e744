# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def enumerate_matchings(int n, list nbrs, long long cap):
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 vertices")
    if n == 0:
        return [0]
    if n % 2:
        return []
    cdef uint64_t nmask[64]
    cdef int nb[64][64]
    cdef int ne[64][64]
    cdef int deg[64]
    cdef uint64_t cover[33]
    cdef uint64_t acc[33]
    cdef int vv[33]
    cdef int pos[33]
    cdef int v, w, e, u, i, d
    cdef uint64_t full, free_, f
    cdef bint entering, ok, advanced
    for v in range(n):
        nmask[v] = 0
        deg[v] = len(nbrs[v])
        for i, (w, e) in enumerate(nbrs[v]):
            if e >= 64:
                raise ValueError("compiled kernel supports at most 64 edges")
            nb[v][i] = w
            ne[v][i] = e
            nmask[v] |= (<uint64_t>1) << w
    full = (~(<uint64_t>0)) if n == 64 else (((<uint64_t>1) << n) - 1)
    out = []
    d = 0
    cover[0] = 0
    acc[0] = 0
    entering = True
    while d >= 0:
        if entering:
            entering = False
            if cover[d] == full:
                out.append(acc[d])
                if len(out) > cap:
                    break
                d -= 1
                continue
            free_ = full & ~cover[d]
            f = free_
            ok = True
            while f:
                u = __builtin_ctzll(f)
                if (nmask[u] & free_) == 0:
                    ok = False
                    break
                f &= f - 1
            if not ok:
                d -= 1
                continue
            vv[d] = __builtin_ctzll(free_)
            pos[d] = 0
        v = vv[d]
        advanced = False
        while pos[d] < deg[v]:
            w = nb[v][pos[d]]
            e = ne[v][pos[d]]
            pos[d] += 1
            if ((cover[d] >> w) & 1) == 0:
                cover[d + 1] = cover[d] | ((<uint64_t>1) << v) | ((<uint64_t>1) << w)
                acc[d + 1] = acc[d] | ((<uint64_t>1) << e)
                d += 1
                entering = True
                advanced = True
                break
        if not advanced:
            d -= 1
    return out


def orientation_sweep(list factor_masks, list base_parities, long long lo, long long hi):
    cdef Py_ssize_t k = len(factor_masks)
    if k == 0:
        return lo if lo < hi else -1
    cdef uint64_t *fm = <uint64_t *> malloc(k * sizeof(uint64_t))
    cdef int *bp = <int *> malloc(k * sizeof(int))
    cdef Py_ssize_t j
    cdef long long o, found = -1
    cdef int p0
    cdef bint ok
    for j in range(k):
        fm[j] = factor_masks[j]
        bp[j] = base_parities[j] & 1
    try:
        with nogil:
            o = lo
            while o < hi:
                p0 = (__builtin_popcountll(<uint64_t>o & fm[0]) + bp[0]) & 1
                ok = True
                for j in range(1, k):
                    if ((__builtin_popcountll(<uint64_t>o & fm[j]) + bp[j]) & 1) != p0:
                        ok = False
                        break
                if ok:
                    found = o
                    break
                o += 1
    finally:
        free(fm)
        free(bp)
    return found
