"""numba versions of the hot loops; same contracts as ``_numpy``."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _hungarian(cost):
    n, m = cost.shape
    u = np.zeros(n + 1)
    v = np.zeros(m + 1)
    p = np.zeros(m + 1, dtype=np.int64)
    way = np.zeros(m + 1, dtype=np.int64)
    minv = np.empty(m + 1)
    used = np.empty(m + 1, dtype=np.bool_)
    row_to_col = np.full(n, -1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv[:] = np.inf
        used[:] = False
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = np.inf
            j1 = -1
            for j in range(1, m + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            if j1 == -1 or delta == np.inf:
                return row_to_col, False
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    for j in range(1, m + 1):
        if p[j] != 0:
            row_to_col[p[j] - 1] = j - 1
    return row_to_col, True


def hungarian(cost):
    return _hungarian(np.ascontiguousarray(cost, dtype=np.float64))


@njit(cache=True, nogil=True)
def _hopcroft_karp(adj):
    r, c = adj.shape
    match_l = np.full(r, -1, dtype=np.int64)
    match_r = np.full(c, -1, dtype=np.int64)
    dist = np.empty(r, dtype=np.int64)
    queue = np.empty(r, dtype=np.int64)
    it = np.empty(r, dtype=np.int64)
    stack = np.empty(r + 1, dtype=np.int64)
    cols = np.empty(r + 1, dtype=np.int64)
    inf = r + c + 5
    while True:
        qt = 0
        for i in range(r):
            if match_l[i] == -1:
                dist[i] = 0
                queue[qt] = i
                qt += 1
            else:
                dist[i] = inf
        qh = 0
        found = False
        while qh < qt:
            i = queue[qh]
            qh += 1
            for j in range(c):
                if adj[i, j]:
                    k = match_r[j]
                    if k == -1:
                        found = True
                    elif dist[k] == inf:
                        dist[k] = dist[i] + 1
                        queue[qt] = k
                        qt += 1
        if not found:
            break
        it[:] = 0
        for s in range(r):
            if match_l[s] != -1:
                continue
            sp = 0
            stack[0] = s
            while sp >= 0:
                u = stack[sp]
                advanced = False
                while it[u] < c:
                    j = it[u]
                    it[u] += 1
                    if not adj[u, j]:
                        continue
                    k = match_r[j]
                    if k == -1:
                        cols[sp] = j
                        for lvl in range(sp + 1):
                            match_l[stack[lvl]] = cols[lvl]
                            match_r[cols[lvl]] = stack[lvl]
                        sp = -1
                        advanced = True
                        break
                    if dist[k] == dist[u] + 1:
                        cols[sp] = j
                        sp += 1
                        stack[sp] = k
                        advanced = True
                        break
                if not advanced:
                    dist[u] = inf
                    sp -= 1
    return match_l


def hopcroft_karp(adj):
    return _hopcroft_karp(np.ascontiguousarray(adj, dtype=np.bool_))


@njit(cache=True, nogil=True)
def _floyd_warshall(d):
    n = d.shape[0]
    for k in range(n):
        for i in range(n):
            dik = d[i, k]
            if dik == np.inf:
                continue
            for j in range(n):
                alt = dik + d[k, j]
                if alt < d[i, j]:
                    d[i, j] = alt
    return d


def floyd_warshall(d):
    return _floyd_warshall(np.array(d, dtype=np.float64, copy=True))


@njit(cache=True, nogil=True)
def _hall_values(dist, combos):
    n_combo, j = combos.shape
    a = dist.shape[1]
    out = np.empty(n_combo)
    top = np.empty(j)  # the j smallest column minima so far, ascending
    for t in range(n_combo):
        filled = 0
        for col in range(a):
            x = dist[combos[t, 0], col]
            for q in range(1, j):
                y = dist[combos[t, q], col]
                if y < x:
                    x = y
            if filled == j and not x < top[j - 1]:
                continue
            pos = filled if filled < j else j - 1
            while pos > 0 and top[pos - 1] > x:
                top[pos] = top[pos - 1]
                pos -= 1
            top[pos] = x
            if filled < j:
                filled += 1
        out[t] = top[j - 1]
    return out


def hall_values(dist, combos):
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    combos = np.ascontiguousarray(combos, dtype=np.int64)
    n_combo, j = combos.shape
    if n_combo == 0:
        return np.empty(0)
    if j == 0:
        return np.zeros(n_combo)
    if dist.shape[1] < j:
        return np.full(n_combo, np.inf)
    return _hall_values(dist, combos)
