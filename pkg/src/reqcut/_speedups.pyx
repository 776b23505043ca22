# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Must stay numerically identical to _kernels_py:
same SplitMix64 mixing, same (0, 1] double mapping, same canonical
component labeling. Cross-backend tests compare outputs bit for bit.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline u64 _mix(u64 x) nogil:
    cdef u64 z = x + GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def splitmix64(x):
    cdef u64 xv = <u64> (x & 0xFFFFFFFFFFFFFFFF)
    return int(_mix(xv))


def stream_value(seed, index):
    cdef u64 s = <u64> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef u64 i = <u64> (index & 0xFFFFFFFFFFFFFFFF)
    return int(_mix(s + i * GOLDEN))


def unit_interval(z):
    cdef u64 zv = <u64> (z & 0xFFFFFFFFFFFFFFFF)
    return <double> ((zv >> 11) + 1) * INV_2_53


def threshold_draws(seed, m, alpha):
    cdef u64 s = <u64> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t mm = m
    cdef double a = alpha
    out_arr = np.empty(mm, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t e
    cdef u64 z
    for e in range(mm):
        z = _mix(s + (<u64> e) * GOLDEN)
        out[e] = ((<double> ((z >> 11) + 1)) * INV_2_53) * a
    return out_arr


cdef Py_ssize_t _find(cnp.int64_t[::1] parent, Py_ssize_t x) nogil:
    cdef Py_ssize_t root = x
    cdef Py_ssize_t nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def component_labels(n, eu, ev, keep):
    cdef Py_ssize_t nn = n
    cdef cnp.int64_t[::1] eu_v = np.ascontiguousarray(eu, dtype=np.int64)
    cdef cnp.int64_t[::1] ev_v = np.ascontiguousarray(ev, dtype=np.int64)
    cdef cnp.uint8_t[::1] keep_v = np.ascontiguousarray(keep, dtype=np.uint8)
    parent_arr = np.arange(nn, dtype=np.int64)
    cdef cnp.int64_t[::1] parent = parent_arr
    cdef Py_ssize_t i, ru, rv, v, r
    for i in range(eu_v.shape[0]):
        if keep_v[i]:
            ru = _find(parent, <Py_ssize_t> eu_v[i])
            rv = _find(parent, <Py_ssize_t> ev_v[i])
            if ru != rv:
                parent[ru] = rv
    best_arr = np.arange(nn, dtype=np.int64)
    cdef cnp.int64_t[::1] best = best_arr
    for v in range(nn):
        r = _find(parent, v)
        if v < best[r]:
            best[r] = v
    out_arr = np.empty(nn, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    for v in range(nn):
        out[v] = best[_find(parent, v)]
    return out_arr


def count_group_components(labels, members, offsets):
    cdef cnp.int64_t[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef cnp.int64_t[::1] mem = np.ascontiguousarray(members, dtype=np.int64)
    cdef cnp.int64_t[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t g = off.shape[0] - 1
    cdef Py_ssize_t n = lab.shape[0]
    out_arr = np.empty(g, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    # mark[label] = current group index; labels are vertex ids, so < n
    mark_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] mark = mark_arr
    cdef Py_ssize_t i, j, cnt
    cdef cnp.int64_t lb
    for i in range(g):
        cnt = 0
        for j in range(off[i], off[i + 1]):
            lb = lab[mem[j]]
            if mark[lb] != i:
                mark[lb] = i
                cnt += 1
        out[i] = cnt
    return out_arr


def pair_distances_unweighted(n, eu, ev, qu, qv):
    cdef Py_ssize_t nn = n
    cdef cnp.int64_t[::1] eu_v = np.ascontiguousarray(eu, dtype=np.int64)
    cdef cnp.int64_t[::1] ev_v = np.ascontiguousarray(ev, dtype=np.int64)
    cdef cnp.int64_t[::1] qu_v = np.ascontiguousarray(qu, dtype=np.int64)
    cdef cnp.int64_t[::1] qv_v = np.ascontiguousarray(qv, dtype=np.int64)
    cdef Py_ssize_t k = eu_v.shape[0]
    cdef Py_ssize_t q = qu_v.shape[0]

    off_arr = np.zeros(nn + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] off = off_arr
    cdef Py_ssize_t i, u, v
    for i in range(k):
        off[eu_v[i] + 1] += 1
        off[ev_v[i] + 1] += 1
    for i in range(nn):
        off[i + 1] += off[i]
    adj_arr = np.empty(2 * k, dtype=np.int64)
    cdef cnp.int64_t[::1] adj = adj_arr
    fill_arr = np.asarray(off_arr[:nn]).copy()
    cdef cnp.int64_t[::1] fill = fill_arr
    for i in range(k):
        u = <Py_ssize_t> eu_v[i]
        v = <Py_ssize_t> ev_v[i]
        adj[fill[u]] = v
        fill[u] += 1
        adj[fill[v]] = u
        fill[v] += 1

    out_arr = np.empty(q, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    dist_arr = np.empty(nn, dtype=np.int64)
    cdef cnp.int64_t[::1] dist = dist_arr
    queue_arr = np.empty(nn, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr
    order_arr = np.argsort(np.asarray(qu_v), kind="stable").astype(np.int64)
    cdef cnp.int64_t[::1] order = order_arr
    cdef Py_ssize_t cache_src = -1
    cdef Py_ssize_t idx, s, t, head, tail, x, p
    cdef cnp.int64_t dx
    for i in range(q):
        idx = <Py_ssize_t> order[i]
        s = <Py_ssize_t> qu_v[idx]
        t = <Py_ssize_t> qv_v[idx]
        if s != cache_src:
            for x in range(nn):
                dist[x] = -1
            dist[s] = 0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                x = <Py_ssize_t> queue[head]
                head += 1
                dx = dist[x]
                for p in range(off[x], off[x + 1]):
                    if dist[adj[p]] < 0:
                        dist[adj[p]] = dx + 1
                        queue[tail] = adj[p]
                        tail += 1
            cache_src = s
        out[idx] = dist[t]
    return out_arr
