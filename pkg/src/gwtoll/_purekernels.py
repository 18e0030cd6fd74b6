"""Pure-Python versions of the routines in ``_kernels.pyx``.

Used when the compiled extension is unavailable or when ``GWTOLL_PURE=1``.
Loops run over Python lists, which is markedly faster than indexing numpy
arrays element by element.
"""
import numpy as np

WIDEN = 1e-15

LEAF, OLDLEAF, PATH, OLDPATH = 0, 1, 2, 3


def tree_arrays(outdeg):
    deg = np.asarray(outdeg, dtype=np.int64).tolist()
    n = len(deg)
    parent = [-1] * n
    depth = [0] * n
    stack = []
    bad = -1
    for i, k in enumerate(deg):
        if k < 0:
            bad = i
            break
        if i > 0:
            if not stack:
                bad = i
                break
            top = stack[-1]
            p = top[0]
            parent[i] = p
            depth[i] = depth[p] + 1
            top[1] -= 1
            if top[1] == 0:
                stack.pop()
        if k > 0:
            stack.append([i, k])
    if bad < 0 and stack:
        bad = n
    size = [1] * n
    if bad < 0:
        for i in range(n - 1, 0, -1):
            size[parent[i]] += size[i]
    return (
        np.array(parent, dtype=np.int64),
        np.array(size, dtype=np.int64),
        np.array(depth, dtype=np.int64),
        bad,
    )


def bfs_to_preorder(bfs_outdeg):
    deg = np.asarray(bfs_outdeg, dtype=np.int64).tolist()
    n = len(deg)
    first = [0] * n
    nxt = 1
    for i, k in enumerate(deg):
        first[i] = nxt
        nxt += k
    out = []
    stack = [0] if n else []
    while stack:
        v = stack.pop()
        out.append(deg[v])
        stack.extend(range(first[v] + deg[v] - 1, first[v] - 1, -1))
    return np.array(out, dtype=np.int64)


def ind_rho(parent):
    par = np.asarray(parent).tolist()
    n = len(par)
    rho = [0.0] * n
    acc = [1.0] * n
    for v in range(n - 1, -1, -1):
        r = 1.0 / (1.0 + acc[v])
        rho[v] = r
        if v > 0:
            acc[par[v]] *= r
    return np.array(rho)


def match_rho(parent):
    par = np.asarray(parent).tolist()
    n = len(par)
    rho = [0.0] * n
    acc = [0.0] * n
    for v in range(n - 1, -1, -1):
        r = 1.0 / (1.0 + acc[v])
        rho[v] = r
        if v > 0:
            acc[par[v]] += r
    return np.array(rho)


def dom_rho(parent):
    par = np.asarray(parent).tolist()
    n = len(par)
    r0 = [0.0] * n
    rs = [0.0] * n
    prod0 = [1.0] * n
    prods = [1.0] * n
    for v in range(n - 1, -1, -1):
        d = 1.0 - prod0[v] + prods[v]
        a = (1.0 - prod0[v]) / d
        b = prod0[v] / d
        r0[v] = a
        rs[v] = b
        if v > 0:
            p = par[v]
            prod0[p] *= a
            prods[p] *= 1.0 + b
    return np.array(r0), np.array(rs)


def ind_envelope(parent, depth, M):
    par = np.asarray(parent).tolist()
    dep = np.asarray(depth).tolist()
    n = len(par)
    nan = float("nan")
    lo, hi, exact = [nan] * n, [nan] * n, [0] * n
    plo, phi, allex = [1.0] * n, [1.0] * n, [1] * n
    for v in range(n - 1, -1, -1):
        if dep[v] > M:
            continue
        if dep[v] == M:
            a, b, ex = 0.5, 1.0, 0
        else:
            ex = allex[v]
            if ex:
                a = b = 1.0 / (1.0 + phi[v])
            else:
                a = 1.0 / (1.0 + phi[v]) * (1.0 - WIDEN)
                b = 1.0 / (1.0 + plo[v]) * (1.0 + WIDEN)
                a = max(a, 0.5)
                b = min(b, 1.0)
        lo[v], hi[v], exact[v] = a, b, ex
        if v > 0:
            p = par[v]
            plo[p] *= a
            phi[p] *= b
            if not ex:
                allex[p] = 0
    return np.array(lo), np.array(hi), np.array(exact, dtype=np.uint8)


def match_envelope(parent, depth, M):
    par = np.asarray(parent).tolist()
    dep = np.asarray(depth).tolist()
    n = len(par)
    nan = float("nan")
    lo, hi, exact = [nan] * n, [nan] * n, [0] * n
    slo, shi, allex = [0.0] * n, [0.0] * n, [1] * n
    for v in range(n - 1, -1, -1):
        if dep[v] > M:
            continue
        if dep[v] == M:
            a, b, ex = 0.0, 1.0, 0
        else:
            ex = allex[v]
            if ex:
                a = b = 1.0 / (1.0 + shi[v])
            else:
                a = 1.0 / (1.0 + shi[v]) * (1.0 - WIDEN)
                b = min(1.0 / (1.0 + slo[v]) * (1.0 + WIDEN), 1.0)
        lo[v], hi[v], exact[v] = a, b, ex
        if v > 0:
            p = par[v]
            slo[p] += a
            shi[p] += b
            if not ex:
                allex[p] = 0
    return np.array(lo), np.array(hi), np.array(exact, dtype=np.uint8)


def dom_envelope(parent, depth, outdeg, M):
    par = np.asarray(parent).tolist()
    dep = np.asarray(depth).tolist()
    deg = np.asarray(outdeg).tolist()
    n = len(par)
    nan = float("nan")
    lo0, hi0, los, his = [nan] * n, [nan] * n, [nan] * n, [nan] * n
    exact = [0] * n
    plo, phi, alo, ahi = [1.0] * n, [1.0] * n, [1.0] * n, [1.0] * n
    allex = [1] * n
    for v in range(n - 1, -1, -1):
        if dep[v] > M:
            continue
        if dep[v] == M:
            a0, b0, as_, bs, ex = 0.0, 0.5, 0.0, 1.0, 0
        else:
            ex = allex[v]
            if ex:
                d = 1.0 - phi[v] + ahi[v]
                a0 = b0 = (1.0 - phi[v]) / d
                as_ = bs = phi[v] / d
            else:
                if deg[v] == 1 and M - dep[v] >= 2:
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
                b0 = min(b0 * (1.0 + WIDEN), 0.5)
                as_ = as_ * (1.0 - WIDEN)
                bs = min(bs * (1.0 + WIDEN), 1.0)
        lo0[v], hi0[v], los[v], his[v], exact[v] = a0, b0, as_, bs, ex
        if v > 0:
            p = par[v]
            plo[p] *= a0
            phi[p] *= b0
            alo[p] *= 1.0 + as_
            ahi[p] *= 1.0 + bs
            if not ex:
                allex[p] = 0
    return (
        np.array(lo0),
        np.array(hi0),
        np.array(los),
        np.array(his),
        np.array(exact, dtype=np.uint8),
    )


def deletion_rounds(parent, outdeg, kind, r):
    # Vectorised per round; the subtree test uses preorder span sums.
    par = np.asarray(parent, dtype=np.int64)
    n = len(par)
    rnd = np.zeros(n, dtype=np.int64)
    if n == 1:
        return rnd
    alive = np.ones(n, dtype=bool)
    cnt = np.array(outdeg, dtype=np.int64)
    nonroot = np.arange(1, n)
    size = tree_arrays(outdeg)[1]
    for rd in range(1, r + 1):
        live = nonroot[alive[1:]]
        if kind in (OLDLEAF, OLDPATH):
            first = np.full(n, -1, dtype=np.int64)
            parents_live = par[live]
            uniq, idx = np.unique(parents_live, return_index=True)
            first[uniq] = live[idx]
        if kind in (PATH, OLDPATH):
            branching = (alive & (cnt >= 2)).astype(np.int64)
            csum = np.concatenate(([0], np.cumsum(branching)))
            chain = (csum[live + size[live]] - csum[live]) == 0
        if kind == LEAF:
            ok = cnt[live] == 0
        elif kind == OLDLEAF:
            ok = (cnt[live] == 0) & (first[par[live]] == live)
        elif kind == PATH:
            ok = chain
        else:
            ok = chain & (first[par[live]] == live)
        victims = live[ok]
        if victims.size == 0:
            break
        alive[victims] = False
        rnd[victims] = rd
        np.subtract.at(cnt, par[victims], 1)
    return rnd
