# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels: union-find components, k-core peeling, S-graph enumeration."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline Py_ssize_t _find(Py_ssize_t[::1] parent, Py_ssize_t x) noexcept nogil:
    cdef Py_ssize_t root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def component_labels(Py_ssize_t n, const cnp.int64_t[::1] u, const cnp.int64_t[::1] v):
    """Label every vertex by the smallest vertex of its component."""
    cdef Py_ssize_t[::1] parent = np.arange(n, dtype=np.intp)
    cdef Py_ssize_t i, a, b, m = u.shape[0]
    cdef cnp.int64_t[::1] out
    with nogil:
        for i in range(m):
            a = _find(parent, u[i])
            b = _find(parent, v[i])
            if a == b:
                continue
            # keep the smaller root so labels are component minima
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
    labels = np.empty(n, dtype=np.int64)
    out = labels
    with nogil:
        for i in range(n):
            out[i] = _find(parent, i)
    return labels


def kcore_mask(Py_ssize_t n, const cnp.int64_t[::1] u, const cnp.int64_t[::1] v, Py_ssize_t k):
    """Alive mask of the k-core; a loop adds 2 to its vertex degree."""
    cdef Py_ssize_t m = u.shape[0], i, j, x, y, head = 0, tail = 0
    cdef cnp.int64_t[::1] deg = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] start = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] adj = np.empty(2 * m, dtype=np.int64)
    cdef cnp.int64_t[::1] fill
    cdef cnp.int64_t[::1] queue = np.empty(n, dtype=np.int64)
    alive_arr = np.ones(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] alive = alive_arr
    cdef cnp.uint8_t[::1] queued = np.zeros(n, dtype=np.uint8)
    with nogil:
        for i in range(m):
            deg[u[i]] += 1
            deg[v[i]] += 1
            if u[i] != v[i]:
                start[u[i] + 1] += 1
                start[v[i] + 1] += 1
        for i in range(n):
            start[i + 1] += start[i]
    fill = np.array(start[:n], dtype=np.int64)
    with nogil:
        for i in range(m):
            x = u[i]
            y = v[i]
            if x != y:
                adj[fill[x]] = y
                fill[x] += 1
                adj[fill[y]] = x
                fill[y] += 1
        for i in range(n):
            if deg[i] < k:
                queue[tail] = i
                tail += 1
                queued[i] = 1
        while head < tail:
            x = queue[head]
            head += 1
            alive[x] = 0
            for j in range(start[x], start[x + 1]):
                y = adj[j]
                if alive[y] and not queued[y]:
                    deg[y] -= 1
                    if deg[y] < k:
                        queue[tail] = y
                        tail += 1
                        queued[y] = 1
    return alive_arr.astype(bool)


def enumerate_s_masks(int n, allowed):
    """Edge-subset bitmasks of K_n whose degrees all satisfy ``allowed[d]``.

    Edges are ordered (0,1), (0,2), ..., (n-2,n-1).  Subsets are visited in
    Gray-code order so each step toggles one edge and updates two degrees.
    """
    cdef int m = n * (n - 1) // 2
    cdef int i, j, e, bad = 0
    cdef long long step, total = 1LL << m
    cdef long long mask = 0, count = 0
    cdef int eu[64]
    cdef int ev[64]
    cdef int deg[16]
    cdef unsigned char ok[16]
    e = 0
    for i in range(n):
        for j in range(i + 1, n):
            eu[e] = i
            ev[e] = j
            e += 1
    for i in range(n):
        deg[i] = 0
        ok[i] = 1 if allowed[i] else 0
    if not ok[0]:
        bad = n
    out_arr = np.empty(total if bad == 0 else max(total // 4, 16), dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    if bad == 0:
        out[0] = 0
        count = 1
    for step in range(1, total):
        # bit flipped between consecutive Gray codes = trailing zeros of step
        e = 0
        while not ((step >> e) & 1):
            e += 1
        i = eu[e]
        j = ev[e]
        bad -= (not ok[deg[i]]) + (not ok[deg[j]])
        if (mask >> e) & 1:
            deg[i] -= 1
            deg[j] -= 1
        else:
            deg[i] += 1
            deg[j] += 1
        mask ^= (1LL << e)
        bad += (not ok[deg[i]]) + (not ok[deg[j]])
        if bad == 0:
            if count == out.shape[0]:
                out_arr = np.resize(out_arr, min(2 * count, total))
                out = out_arr
            out[count] = mask
            count += 1
    res = np.sort(out_arr[:count])
    return res


def mask_statistics(int n, const cnp.int64_t[::1] masks):
    """Per-mask edges, triangles, component count, largest component, degree counts.

    Edge order as in :func:`enumerate_s_masks`.
    """
    cdef Py_ssize_t g, G = masks.shape[0]
    cdef int m = n * (n - 1) // 2
    cdef int i, j, l, e, a, b, best, ncomp
    cdef long long mask
    cdef int eu[64]
    cdef int ev[64]
    cdef int eid[16][16]
    cdef int deg[16]
    cdef int par[16]
    cdef int size[16]
    edges_arr = np.zeros(G, dtype=np.int64)
    tri_arr = np.zeros(G, dtype=np.int64)
    ncomp_arr = np.zeros(G, dtype=np.int64)
    big_arr = np.zeros(G, dtype=np.int64)
    dc_arr = np.zeros((G, n), dtype=np.int64)
    cdef cnp.int64_t[::1] edges = edges_arr
    cdef cnp.int64_t[::1] tri = tri_arr
    cdef cnp.int64_t[::1] nc = ncomp_arr
    cdef cnp.int64_t[::1] big = big_arr
    cdef cnp.int64_t[:, ::1] dc = dc_arr
    e = 0
    for i in range(n):
        for j in range(i + 1, n):
            eu[e] = i
            ev[e] = j
            eid[i][j] = e
            eid[j][i] = e
            e += 1
    with nogil:
        for g in range(G):
            mask = masks[g]
            for i in range(n):
                deg[i] = 0
                par[i] = i
                size[i] = 0
            for e in range(m):
                if (mask >> e) & 1:
                    edges[g] += 1
                    a = eu[e]
                    b = ev[e]
                    deg[a] += 1
                    deg[b] += 1
                    while par[a] != a:
                        a = par[a]
                    while par[b] != b:
                        b = par[b]
                    if a < b:
                        par[b] = a
                    elif b < a:
                        par[a] = b
            for i in range(n):
                for j in range(i + 1, n):
                    if not (mask >> eid[i][j]) & 1:
                        continue
                    for l in range(j + 1, n):
                        if ((mask >> eid[i][l]) & 1) and ((mask >> eid[j][l]) & 1):
                            tri[g] += 1
            ncomp = 0
            best = 0
            for i in range(n):
                a = i
                while par[a] != a:
                    a = par[a]
                size[a] += 1
                dc[g, deg[i]] += 1
            for i in range(n):
                if size[i] > 0:
                    ncomp += 1
                    if size[i] > best:
                        best = size[i]
            nc[g] = ncomp
            big[g] = best
    return edges_arr, tri_arr, ncomp_arr, big_arr, dc_arr
