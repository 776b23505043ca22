"""Pure-Python kernels.

The compiled module (reqcut._speedups) implements the same six functions.
Solver output must not depend on which backend is active, so both sides use
the exact same integer mixing and the exact same IEEE double expressions:
u = ((z >> 11) + 1) * 2**-53 lies in (0, 1], hence x = u * alpha in (0, alpha],
which makes a d=0 edge impossible to cut and a d >= alpha edge always cut.

component_labels returns the canonical labeling (smallest vertex id in each
component) so the result does not depend on union-find internals.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0


def splitmix64(x):
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_value(seed, index):
    """index-th output of the SplitMix64 stream seeded at seed."""
    return splitmix64((seed + index * GOLDEN) & MASK64)


def unit_interval(z):
    """Map a 64-bit word to a double in (0, 1]."""
    return ((z >> 11) + 1) * _INV_2_53


def threshold_draws(seed, m, alpha):
    """Per-edge thresholds x_e = u_e * alpha, keyed by (seed, edge_id)."""
    out = np.empty(m, dtype=np.float64)
    s = seed & MASK64
    for e in range(m):
        z = splitmix64((s + e * GOLDEN) & MASK64)
        out[e] = (((z >> 11) + 1) * _INV_2_53) * alpha
    return out


def component_labels(n, eu, ev, keep):
    """Labels of connected components over the kept edges.

    label[v] = smallest vertex id in v's component.
    """
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for i in range(len(eu)):
        if keep[i]:
            ru, rv = find(int(eu[i])), find(int(ev[i]))
            if ru != rv:
                parent[ru] = rv
    best = list(range(n))
    for v in range(n):
        r = find(v)
        if v < best[r]:
            best[r] = v
    out = np.empty(n, dtype=np.int64)
    for v in range(n):
        out[v] = best[find(v)]
    return out


def count_group_components(labels, members, offsets):
    """Distinct component labels inside each member slice.

    members is the concatenation of all groups, offsets its g+1 boundaries.
    """
    g = len(offsets) - 1
    out = np.empty(g, dtype=np.int64)
    for i in range(g):
        seen = set()
        for j in range(int(offsets[i]), int(offsets[i + 1])):
            seen.add(int(labels[int(members[j])]))
        out[i] = len(seen)
    return out


def pair_distances_unweighted(n, eu, ev, qu, qv):
    """Hop distance between qu[i] and qv[i] over the given edges, -1 if apart."""
    k = len(eu)
    # CSR adjacency
    deg = [0] * n
    for i in range(k):
        deg[int(eu[i])] += 1
        deg[int(ev[i])] += 1
    off = [0] * (n + 1)
    for v in range(n):
        off[v + 1] = off[v] + deg[v]
    adj = [0] * (2 * k)
    fill = off[:]
    for i in range(k):
        u, v = int(eu[i]), int(ev[i])
        adj[fill[u]] = v
        fill[u] += 1
        adj[fill[v]] = u
        fill[v] += 1

    q = len(qu)
    out = np.empty(q, dtype=np.int64)
    dist = [-1] * n
    cache_src = -1
    order = sorted(range(q), key=lambda i: int(qu[i]))
    queue = [0] * n
    for idx in order:
        s, t = int(qu[idx]), int(qv[idx])
        if s != cache_src:
            for v in range(n):
                dist[v] = -1
            dist[s] = 0
            queue[0] = s
            head, tail = 0, 1
            while head < tail:
                x = queue[head]
                head += 1
                dx = dist[x]
                for p in range(off[x], off[x + 1]):
                    y = adj[p]
                    if dist[y] < 0:
                        dist[y] = dx + 1
                        queue[tail] = y
                        tail += 1
            cache_src = s
        out[idx] = dist[t]
    return out
