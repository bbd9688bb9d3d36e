"""Brute-force references used only by the tests.

Nothing here calls the package's matching code: every value comes from
plain enumeration over permutations / subsets.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations

import numpy as np

INF = math.inf


def perfect_matchings(w):
    """Yield every row-saturating assignment (tuple of columns) over finite edges."""
    rows, cols = w.shape
    for perm in permutations(range(cols), rows):
        if all(np.isfinite(w[i, j]) for i, j in enumerate(perm)):
            yield perm


def min_perfect_bf(w) -> float:
    best = INF
    for perm in perfect_matchings(w):
        best = min(best, sum(w[i, j] for i, j in enumerate(perm)))
    return best


def bottleneck_bf(w) -> float:
    if w.shape[0] == 0:
        return 0.0
    best = INF
    for perm in perfect_matchings(w):
        best = min(best, max(w[i, j] for i, j in enumerate(perm)))
    return best


def all_matchings(w):
    """Every matching (list of pairs) over finite edges, by recursion on rows."""
    rows, cols = w.shape

    def rec(i, used):
        if i == rows:
            yield []
            return
        yield from rec(i + 1, used)
        for j in range(cols):
            if j not in used and np.isfinite(w[i, j]):
                for rest in rec(i + 1, used | {j}):
                    yield [(i, j)] + rest

    yield from rec(0, frozenset())


def max_card_min_weight_bf(w):
    """(max cardinality, min weight among matchings of that cardinality)."""
    best = (0, 0.0)
    for mt in all_matchings(w):
        c = len(mt)
        wt = sum(w[i, j] for i, j in mt)
        if c > best[0] or (c == best[0] and wt < best[1]):
            best = (c, wt)
    return best


def feasible_bf(w, threshold) -> bool:
    return any(all(w[i, j] <= threshold for i, j in enumerate(p)) for p in perfect_matchings(w))


def _parts(inst):
    m, n = inst.n_r1, inst.n_r2
    d = inst.dist
    r1 = d[:m, m + n:]
    r2 = d[m:m + n, m + n:]
    return r1, r2


def scenario_family(inst):
    sc = inst.scenario_set
    if sc.is_explicit:
        return list(sc.explicit)
    return list(combinations(range(inst.n_r2), sc.k))


def robust_totals_bf(inst):
    """{D1: (cost1, worst cost2)} by pure enumeration."""
    r1, r2 = _parts(inst)
    m, n_d = inst.n_r1, inst.n_d
    out = {}
    for d1 in combinations(range(n_d), m):
        c1 = min_perfect_bf(r1[:, d1])
        if not math.isfinite(c1):
            continue
        avail = [j for j in range(n_d) if j not in d1]
        worst = 0.0
        for s in scenario_family(inst):
            worst = max(worst, bottleneck_bf(r2[np.ix_(list(s), avail)]))
        out[d1] = (c1 / m, worst)
    return out


def robust_opt_bf(inst) -> float:
    return min(a + b for a, b in robust_totals_bf(inst).values())


def supplier_radius_bf(cf, p):
    best = INF
    for pick in combinations(range(cf.shape[1]), p):
        best = min(best, cf[:, list(pick)].min(axis=1).max())
    return best


def _dp_rows(w, combine, start, better):
    """Exhaustive DP over rows with a bitmask of used columns.

    ``combine(value, i, j)`` extends a partial value by edge (i, j) (j is
    None when row i stays unmatched, allowed only if ``combine`` accepts
    it); ``better(a, b)`` says whether a beats b.
    """
    rows, cols = w.shape
    layer = {0: start}
    for i in range(rows):
        nxt = {}
        for mask, val in layer.items():
            options = [(mask, combine(val, i, None))]
            for j in range(cols):
                if not mask >> j & 1 and np.isfinite(w[i, j]):
                    options.append((mask | 1 << j, combine(val, i, j)))
            for m2, v2 in options:
                if v2 is not None and (m2 not in nxt or better(v2, nxt[m2])):
                    nxt[m2] = v2
        layer = nxt
    return layer


def min_perfect_dp(w) -> float:
    """Min weight of a row-saturating matching (inf if none)."""
    layer = _dp_rows(w, lambda v, i, j: None if j is None else v + w[i, j], 0.0,
                     lambda a, b: a < b)
    return min(layer.values(), default=INF)


def bottleneck_dp(w) -> float:
    if w.shape[0] == 0:
        return 0.0
    layer = _dp_rows(w, lambda v, i, j: None if j is None else max(v, w[i, j]), 0.0,
                     lambda a, b: a < b)
    return min(layer.values(), default=INF)


def max_card_min_weight_dp(w):
    """(max cardinality, min weight at that cardinality), as max_card_min_weight_bf."""
    def combine(v, i, j):
        return v if j is None else (v[0] + 1, v[1] + w[i, j])

    layer = _dp_rows(w, combine, (0, 0.0), lambda a, b: (-a[0], a[1]) < (-b[0], b[1]))
    return min(layer.values(), key=lambda v: (-v[0], v[1]))
