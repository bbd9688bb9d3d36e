"""Reference kernels written with numpy (and plain Python where the loop
does not vectorize). Results match the numba kernels bit for bit."""

import numpy as np


def hungarian(cost):
    """Min-cost assignment of every row of ``cost`` (rows <= cols).

    Shortest augmenting paths with dual potentials, one row at a time.
    ``np.inf`` entries are forbidden. Returns ``(row_to_col, ok)``; ``ok`` is
    False when some row cannot be assigned.
    """
    cost = np.asarray(cost, dtype=np.float64)
    n, m = cost.shape
    u = np.zeros(n + 1)
    v = np.zeros(m + 1)
    p = np.zeros(m + 1, dtype=np.int64)
    way = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(m + 1, np.inf)
        used = np.zeros(m + 1, dtype=np.bool_)
        while True:
            used[j0] = True
            i0 = p[j0]
            cur = cost[i0 - 1] - u[i0] - v[1:]
            free = ~used[1:]
            upd = free & (cur < minv[1:])
            minv[1:][upd] = cur[upd]
            way[1:][upd] = j0
            cand = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(cand)) + 1
            delta = cand[j1 - 1]
            if delta == np.inf:
                return np.full(n, -1, dtype=np.int64), False
            u[p[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    row_to_col = np.full(n, -1, dtype=np.int64)
    for j in range(1, m + 1):
        if p[j] != 0:
            row_to_col[p[j] - 1] = j - 1
    return row_to_col, True


def hopcroft_karp(adj):
    """Maximum-cardinality matching on a boolean biadjacency matrix.

    Returns ``match_l`` with the matched column of each row or -1.
    """
    adj = np.asarray(adj, dtype=np.bool_)
    r, c = adj.shape
    nbrs = [np.flatnonzero(adj[i]).tolist() for i in range(r)]
    match_l = [-1] * r
    match_r = [-1] * c
    inf = r + c + 5
    while True:
        dist = [inf] * r
        queue = [i for i in range(r) if match_l[i] == -1]
        for i in queue:
            dist[i] = 0
        found = False
        head = 0
        while head < len(queue):
            i = queue[head]
            head += 1
            for j in nbrs[i]:
                k = match_r[j]
                if k == -1:
                    found = True
                elif dist[k] == inf:
                    dist[k] = dist[i] + 1
                    queue.append(k)
        if not found:
            break
        it = [0] * r
        for s in range(r):
            if match_l[s] != -1:
                continue
            stack = [s]
            cols = []
            while stack:
                u = stack[-1]
                advanced = False
                nb = nbrs[u]
                while it[u] < len(nb):
                    j = nb[it[u]]
                    it[u] += 1
                    k = match_r[j]
                    if k == -1:
                        cols.append(j)
                        for row, col in zip(stack, cols):
                            match_l[row] = col
                            match_r[col] = row
                        stack = []
                        advanced = True
                        break
                    if dist[k] == dist[u] + 1:
                        cols.append(j)
                        stack.append(k)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = inf
                    stack.pop()
                    if cols:
                        cols.pop()
    return np.array(match_l, dtype=np.int64)


def floyd_warshall(d):
    d = np.array(d, dtype=np.float64, copy=True)
    for k in range(d.shape[0]):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def hall_values(dist, combos):
    """For each row ``X`` of ``combos`` (rider indices, all of size j), the
    j-th smallest over columns of ``min_{x in X} dist[x, col]``.

    This is the smallest threshold at which the riders in X see at least
    |X| distinct columns. ``inf`` when there are fewer than j columns.
    """
    dist = np.asarray(dist, dtype=np.float64)
    combos = np.asarray(combos, dtype=np.int64)
    n_combo, j = combos.shape
    a = dist.shape[1]
    if n_combo == 0:
        return np.empty(0)
    if j == 0:
        return np.zeros(n_combo)
    if a < j:
        return np.full(n_combo, np.inf)
    out = np.empty(n_combo)
    chunk = max(1, 4_000_000 // max(1, a * j))
    for start in range(0, n_combo, chunk):
        block = combos[start:start + chunk]
        mins = dist[block].min(axis=1)
        out[start:start + chunk] = np.partition(mins, j - 1, axis=1)[:, j - 1]
    return out
