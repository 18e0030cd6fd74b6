# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every routine here has a twin in ``_purekernels.py``; the two must return
identical arrays (the test-suite checks this on random trees). Trees are
passed as preorder arrays, so a reverse index sweep visits every child
before its parent.
"""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64

cdef double WIDEN = 1e-15
cdef double NAN = float("nan")

LEAF, OLDLEAF, PATH, OLDPATH = 0, 1, 2, 3


def tree_arrays(const i64[::1] outdeg):
    """Parent, subtree size and depth of a preorder outdegree sequence.

    Returns ``(parent, size, depth, bad)``; ``bad`` is -1 for a valid
    sequence, otherwise the first offending position (``n`` when the
    sequence ends with unfilled child slots).
    """
    cdef Py_ssize_t n = outdeg.shape[0]
    parent_a = np.empty(n, dtype=np.int64)
    size_a = np.ones(n, dtype=np.int64)
    depth_a = np.zeros(n, dtype=np.int64)
    stack_node_a = np.empty(n + 1, dtype=np.int64)
    stack_left_a = np.empty(n + 1, dtype=np.int64)
    cdef i64[::1] parent = parent_a
    cdef i64[::1] size = size_a
    cdef i64[::1] depth = depth_a
    cdef i64[::1] stack_node = stack_node_a
    cdef i64[::1] stack_left = stack_left_a
    cdef Py_ssize_t i, top = -1
    cdef i64 p, bad = -1
    with nogil:
        for i in range(n):
            if outdeg[i] < 0:
                bad = i
                break
            if i == 0:
                parent[0] = -1
            else:
                if top < 0:
                    bad = i
                    break
                p = stack_node[top]
                parent[i] = p
                depth[i] = depth[p] + 1
                stack_left[top] -= 1
                if stack_left[top] == 0:
                    top -= 1
            if outdeg[i] > 0:
                top += 1
                stack_node[top] = i
                stack_left[top] = outdeg[i]
        if bad < 0 and top >= 0:
            bad = n
        if bad < 0:
            for i in range(n - 1, 0, -1):
                size[parent[i]] += size[i]
    return parent_a, size_a, depth_a, bad


def bfs_to_preorder(const i64[::1] bfs_outdeg):
    """Reorder a (valid) breadth-first outdegree sequence into preorder."""
    cdef Py_ssize_t n = bfs_outdeg.shape[0]
    out_a = np.empty(n, dtype=np.int64)
    first_a = np.empty(n, dtype=np.int64)
    stack_a = np.empty(n + 1, dtype=np.int64)
    cdef i64[::1] out = out_a
    cdef i64[::1] first = first_a
    cdef i64[::1] stack = stack_a
    cdef Py_ssize_t i, k = 0, sp = 0
    cdef i64 v, c, nxt = 1
    with nogil:
        for i in range(n):
            first[i] = nxt
            nxt += bfs_outdeg[i]
        if n > 0:
            stack[0] = 0
            sp = 1
        while sp > 0:
            sp -= 1
            v = stack[sp]
            out[k] = bfs_outdeg[v]
            k += 1
            c = bfs_outdeg[v]
            while c > 0:
                c -= 1
                stack[sp] = first[v] + c
                sp += 1
    return out_a


def ind_rho(const i64[::1] parent):
    """rho(v) = 1 / (1 + prod over children of rho)."""
    cdef Py_ssize_t n = parent.shape[0], v
    rho_a = np.empty(n, dtype=np.float64)
    acc_a = np.ones(n, dtype=np.float64)
    cdef double[::1] rho = rho_a
    cdef double[::1] acc = acc_a
    cdef double r
    with nogil:
        for v in range(n - 1, -1, -1):
            r = 1.0 / (1.0 + acc[v])
            rho[v] = r
            if v > 0:
                acc[parent[v]] *= r
    return rho_a


def match_rho(const i64[::1] parent):
    """rho(v) = 1 / (1 + sum over children of rho)."""
    cdef Py_ssize_t n = parent.shape[0], v
    rho_a = np.empty(n, dtype=np.float64)
    acc_a = np.zeros(n, dtype=np.float64)
    cdef double[::1] rho = rho_a
    cdef double[::1] acc = acc_a
    cdef double r
    with nogil:
        for v in range(n - 1, -1, -1):
            r = 1.0 / (1.0 + acc[v])
            rho[v] = r
            if v > 0:
                acc[parent[v]] += r
    return rho_a


def dom_rho(const i64[::1] parent):
    """(rho0, rhostar) from the dominating-set ratio recursions."""
    cdef Py_ssize_t n = parent.shape[0], v
    r0_a = np.empty(n, dtype=np.float64)
    rs_a = np.empty(n, dtype=np.float64)
    prod0_a = np.ones(n, dtype=np.float64)
    prods_a = np.ones(n, dtype=np.float64)
    cdef double[::1] r0 = r0_a
    cdef double[::1] rs = rs_a
    cdef double[::1] prod0 = prod0_a
    cdef double[::1] prods = prods_a
    cdef double d, a, b
    with nogil:
        for v in range(n - 1, -1, -1):
            d = 1.0 - prod0[v] + prods[v]
            a = (1.0 - prod0[v]) / d
            b = prod0[v] / d
            r0[v] = a
            rs[v] = b
            if v > 0:
                prod0[parent[v]] *= a
                prods[parent[v]] *= 1.0 + b
    return r0_a, rs_a


def ind_envelope(const i64[::1] parent, const i64[::1] depth, i64 M):
    """Inf/sup of rho given the first M levels, with outward widening."""
    cdef Py_ssize_t n = parent.shape[0], v
    lo_a = np.full(n, np.nan)
    hi_a = np.full(n, np.nan)
    exact_a = np.zeros(n, dtype=np.uint8)
    plo_a = np.ones(n)
    phi_a = np.ones(n)
    allex_a = np.ones(n, dtype=np.uint8)
    cdef double[::1] lo = lo_a
    cdef double[::1] hi = hi_a
    cdef unsigned char[::1] exact = exact_a
    cdef double[::1] plo = plo_a
    cdef double[::1] phi = phi_a
    cdef unsigned char[::1] allex = allex_a
    cdef double a, b
    cdef unsigned char ex
    with nogil:
        for v in range(n - 1, -1, -1):
            if depth[v] > M:
                continue
            if depth[v] == M:
                a = 0.5
                b = 1.0
                ex = 0
            else:
                ex = allex[v]
                if ex:
                    a = 1.0 / (1.0 + phi[v])
                    b = a
                else:
                    a = 1.0 / (1.0 + phi[v])
                    b = 1.0 / (1.0 + plo[v])
                    a = a * (1.0 - WIDEN)
                    b = b * (1.0 + WIDEN)
                    if a < 0.5:
                        a = 0.5
                    if b > 1.0:
                        b = 1.0
            lo[v] = a
            hi[v] = b
            exact[v] = ex
            if v > 0:
                plo[parent[v]] *= a
                phi[parent[v]] *= b
                if not ex:
                    allex[parent[v]] = 0
    return lo_a, hi_a, exact_a


def match_envelope(const i64[::1] parent, const i64[::1] depth, i64 M):
    """Inf/sup of the matching ratio given the first M levels."""
    cdef Py_ssize_t n = parent.shape[0], v
    lo_a = np.full(n, np.nan)
    hi_a = np.full(n, np.nan)
    exact_a = np.zeros(n, dtype=np.uint8)
    slo_a = np.zeros(n)
    shi_a = np.zeros(n)
    allex_a = np.ones(n, dtype=np.uint8)
    cdef double[::1] lo = lo_a
    cdef double[::1] hi = hi_a
    cdef unsigned char[::1] exact = exact_a
    cdef double[::1] slo = slo_a
    cdef double[::1] shi = shi_a
    cdef unsigned char[::1] allex = allex_a
    cdef double a, b
    cdef unsigned char ex
    with nogil:
        for v in range(n - 1, -1, -1):
            if depth[v] > M:
                continue
            if depth[v] == M:
                a = 0.0
                b = 1.0
                ex = 0
            else:
                ex = allex[v]
                if ex:
                    a = 1.0 / (1.0 + shi[v])
                    b = a
                else:
                    a = 1.0 / (1.0 + shi[v])
                    b = 1.0 / (1.0 + slo[v])
                    a = a * (1.0 - WIDEN)
                    b = b * (1.0 + WIDEN)
                    if b > 1.0:
                        b = 1.0
            lo[v] = a
            hi[v] = b
            exact[v] = ex
            if v > 0:
                slo[parent[v]] += a
                shi[parent[v]] += b
                if not ex:
                    allex[parent[v]] = 0
    return lo_a, hi_a, exact_a


def dom_envelope(const i64[::1] parent, const i64[::1] depth,
                 const i64[::1] outdeg, i64 M):
    """Inf/sup boxes for (rho0, rhostar) given the first M levels.

    Nodes at depth M get the a-priori box [0, 1/2] x [0, 1]. A node of
    outdegree one with at least two observed levels below it is composed
    directly from its grandchildren, which is tighter than chaining boxes.
    """
    cdef Py_ssize_t n = parent.shape[0], v, c
    lo0_a = np.full(n, np.nan)
    hi0_a = np.full(n, np.nan)
    los_a = np.full(n, np.nan)
    his_a = np.full(n, np.nan)
    exact_a = np.zeros(n, dtype=np.uint8)
    plo_a = np.ones(n)
    phi_a = np.ones(n)
    alo_a = np.ones(n)
    ahi_a = np.ones(n)
    allex_a = np.ones(n, dtype=np.uint8)
    cdef double[::1] lo0 = lo0_a
    cdef double[::1] hi0 = hi0_a
    cdef double[::1] los = los_a
    cdef double[::1] his = his_a
    cdef unsigned char[::1] exact = exact_a
    cdef double[::1] plo = plo_a
    cdef double[::1] phi = phi_a
    cdef double[::1] alo = alo_a
    cdef double[::1] ahi = ahi_a
    cdef unsigned char[::1] allex = allex_a
    cdef double a0, b0, as_, bs, d
    cdef unsigned char ex
    with nogil:
        for v in range(n - 1, -1, -1):
            if depth[v] > M:
                continue
            if depth[v] == M:
                a0 = 0.0
                b0 = 0.5
                as_ = 0.0
                bs = 1.0
                ex = 0
            else:
                ex = allex[v]
                if ex:
                    d = 1.0 - phi[v] + ahi[v]
                    a0 = (1.0 - phi[v]) / d
                    b0 = a0
                    as_ = phi[v] / d
                    bs = as_
                else:
                    if outdeg[v] == 1 and M - depth[v] >= 2:
                        c = v + 1
                        a0 = alo[c] / (1.0 + 2.0 * alo[c])
                        b0 = ahi[c] / (1.0 + 2.0 * ahi[c])
                        as_ = (1.0 - phi[c]) / (1.0 + 2.0 * ahi[c])
                        bs = (1.0 - plo[c]) / (1.0 + 2.0 * alo[c])
                    else:
                        a0 = (1.0 - phi[v]) / (1.0 - phi[v] + ahi[v])
                        b0 = (1.0 - plo[v]) / (1.0 - plo[v] + alo[v])
                        as_ = plo[v] / (1.0 - plo[v] + ahi[v])
                        bs = phi[v] / (1.0 - phi[v] + alo[v])
                    a0 = a0 * (1.0 - WIDEN)
                    b0 = b0 * (1.0 + WIDEN)
                    as_ = as_ * (1.0 - WIDEN)
                    bs = bs * (1.0 + WIDEN)
                    if b0 > 0.5:
                        b0 = 0.5
                    if bs > 1.0:
                        bs = 1.0
            lo0[v] = a0
            hi0[v] = b0
            los[v] = as_
            his[v] = bs
            exact[v] = ex
            if v > 0:
                plo[parent[v]] *= a0
                phi[parent[v]] *= b0
                alo[parent[v]] *= 1.0 + as_
                ahi[parent[v]] *= 1.0 + bs
                if not ex:
                    allex[parent[v]] = 0
    return lo0_a, hi0_a, los_a, his_a, exact_a


def deletion_rounds(const i64[::1] parent, const i64[::1] outdeg, int kind, i64 r):
    """Round (1..r) in which each node is deleted, 0 if it survives.

    ``kind``: 0 leaf, 1 old leaf, 2 path, 3 old path. All rules are applied
    to the tree as it stands at the start of the round; the root is immune.
    """
    cdef Py_ssize_t n = parent.shape[0], v
    rnd_a = np.zeros(n, dtype=np.int64)
    alive_a = np.ones(n, dtype=np.uint8)
    cnt_a = np.array(outdeg, dtype=np.int64)
    first_a = np.empty(n, dtype=np.int64)
    bad_a = np.zeros(n, dtype=np.uint8)
    kill_a = np.zeros(n, dtype=np.uint8)
    cdef i64[::1] rnd = rnd_a
    cdef unsigned char[::1] alive = alive_a
    cdef i64[::1] cnt = cnt_a
    cdef i64[::1] first = first_a
    cdef unsigned char[::1] bad = bad_a
    cdef unsigned char[::1] kill = kill_a
    cdef i64 rd, p, killed
    cdef bint need_first = kind == 1 or kind == 3
    cdef bint need_chain = kind == 2 or kind == 3
    cdef bint ok
    with nogil:
        for rd in range(1, r + 1):
            if need_first:
                for v in range(n):
                    first[v] = -1
                for v in range(1, n):
                    if alive[v] and first[parent[v]] < 0:
                        first[parent[v]] = v
            if need_chain:
                for v in range(n):
                    bad[v] = alive[v] and cnt[v] >= 2
                for v in range(n - 1, 0, -1):
                    if alive[v] and bad[v]:
                        bad[parent[v]] = 1
            killed = 0
            for v in range(1, n):
                kill[v] = 0
                if not alive[v]:
                    continue
                if kind == 0:
                    ok = cnt[v] == 0
                elif kind == 1:
                    ok = cnt[v] == 0 and first[parent[v]] == v
                elif kind == 2:
                    ok = not bad[v]
                else:
                    ok = (not bad[v]) and first[parent[v]] == v
                if ok:
                    kill[v] = 1
                    killed += 1
            if killed == 0:
                break
            for v in range(1, n):
                if kill[v]:
                    alive[v] = 0
                    rnd[v] = rd
                    cnt[parent[v]] -= 1
    return rnd_a
