"""Instance families: random Euclidean, the two counterexamples, and the
constructions that encode 3-dimensional matching, set cover and
balanced 2-partition."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from ..errors import MalformedTriples, OddCardinality, UncoveredElement
from ..model import MetricInstance, ScenarioSet, metric_closure


def _rng(seed):
    return np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)


def _line_instance(r1, r2, drivers, scenarios) -> MetricInstance:
    pos = np.array(list(r1) + list(r2) + list(drivers), dtype=np.float64)
    dist = np.abs(pos[:, None] - pos[None, :])
    labels = [f"s{i}" for i in range(len(r2))]
    return MetricInstance(len(r1), labels, len(drivers), dist, scenarios)


def line_instance(r1: Sequence[float], r2: Sequence[float], drivers: Sequence[float],
                  scenarios: ScenarioSet) -> MetricInstance:
    """Points on a line at the given coordinates (R1, R2, D order)."""
    return _line_instance(r1, r2, drivers, scenarios)


def parse_scenario_spec(spec, n_r2: int, rng) -> ScenarioSet:
    """``implicit:K`` or ``explicit:PxS`` (P random scenarios of size S),
    or an existing ScenarioSet."""
    if isinstance(spec, ScenarioSet):
        return spec
    kind, _, arg = str(spec).partition(":")
    if kind == "implicit":
        return ScenarioSet.implicit(int(arg))
    if kind == "explicit":
        p, _, size = arg.partition("x")
        p, size = int(p), int(size)
        if not 1 <= size <= n_r2 or p < 1:
            raise ValueError(f"bad explicit scenario spec {spec!r} for {n_r2} riders")
        return ScenarioSet.of(sorted(rng.choice(n_r2, size=size, replace=False).tolist())
                              for _ in range(p))
    raise ValueError(f"unknown scenario spec {spec!r}")


def gen_random_euclidean(n_r1: int, n_r2: int, n_d: int, scenario_spec="explicit:2x2",
                         box_size: float = 1.0, seed: int = 0) -> MetricInstance:
    """Uniform points in a box_size square with Euclidean distances."""
    if min(n_r1, n_r2, n_d) < 1:
        raise ValueError("counts must be positive")
    rng = _rng(seed)
    pts = rng.uniform(0.0, box_size, size=(n_r1 + n_r2 + n_d, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    np.fill_diagonal(dist, 0.0)
    scen = parse_scenario_spec(scenario_spec, n_r2, rng)
    return MetricInstance(n_r1, [f"s{i}" for i in range(n_r2)], n_d, dist, scen)


def gen_line_counterexample(m: int, epsilon: float) -> MetricInstance:
    """Drivers and first-stage riders alternate on a line with gaps 1 and
    1-eps; one second-stage rider sits 1 beyond the last driver. Greedy
    totals (2-eps)(m+1) while the optimum is 2."""
    if m < 1 or not 0 < epsilon < 1:
        raise ValueError("need m >= 1 and 0 < epsilon < 1")
    drivers = [0.0]
    riders = []
    for _ in range(m):
        riders.append(drivers[-1] + 1.0)
        drivers.append(riders[-1] + (1.0 - epsilon))
    s = drivers[-1] + 1.0
    return _line_instance(riders, [s], drivers, ScenarioSet.of([[0]]))


def gen_surplus_counterexample(m: int, epsilon: float = 0.5, gap: float = 0.1) -> MetricInstance:
    """Line instance with surplus one and two second-stage riders (k=1),
    one ``gap`` beyond each end driver.

    The left half of R1 sits 1-eps right of a driver, the right half 1-eps
    left of one, and an extra driver doubles the middle one. Serving either
    end optimally strands the spare driver in the middle, so the other end
    pays on the order of m; keeping both end drivers free costs 1 + gap.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    if not 0 < epsilon < 1 or gap <= 0:
        raise ValueError("need 0 < epsilon < 1 and gap > 0")
    h = m // 2
    drivers = [0.0]
    riders = []
    for _ in range(h):
        riders.append(drivers[-1] + (1.0 - epsilon))
        drivers.append(riders[-1] + 1.0)
    middle = drivers[-1]
    for _ in range(h, m):
        riders.append(drivers[-1] + 1.0)
        drivers.append(riders[-1] + (1.0 - epsilon))
    drivers.append(middle)
    r2 = [-gap, drivers[-2] + gap]
    return _line_instance(riders, r2, drivers, ScenarioSet.implicit(1))


def _closed(n_r1, labels, n_d, raw, scen, forbidden=None) -> MetricInstance:
    return MetricInstance(n_r1, labels, n_d, metric_closure(raw, forbidden), scen)


def _check_triples(U, V, W, T):
    n = len(U)
    if len(V) != n or len(W) != n:
        raise MalformedTriples(f"|U|, |V|, |W| differ: {len(U)}, {len(V)}, {len(W)}")
    su, sv, sw = set(U), set(V), set(W)
    if len(su) != n or len(sv) != n or len(sw) != n:
        raise MalformedTriples("element lists contain duplicates")
    seen = set()
    for t in T:
        if len(t) != 3 or t[0] not in su or t[1] not in sv or t[2] not in sw:
            raise MalformedTriples(f"triple {t!r} is not in U x V x W")
        if tuple(t) in seen:
            raise MalformedTriples(f"duplicate triple {t!r}")
        seen.add(tuple(t))


def gen_from_3dm(U, V, W, T, n_scenarios: int = 2) -> MetricInstance:
    """Drivers are the triples; scenarios are U and V (and W for three
    scenarios). Element-triple distance is 1 on incidence, 3 otherwise.
    With two scenarios R1 holds deg(w)-1 copies of each w in W; with three,
    R1 holds |T|-n riders at distance 1 from every triple. The optimum is 2
    iff a perfect 3-dimensional matching exists (4 otherwise for three
    scenarios)."""
    U, V, W = list(U), list(V), list(W)
    T = [tuple(t) for t in T]
    _check_triples(U, V, W, T)
    if n_scenarios not in (2, 3):
        raise ValueError("n_scenarios must be 2 or 3")
    n = len(U)
    if len(T) < n:
        raise MalformedTriples(f"{len(T)} triples cannot cover {n} elements")
    if n_scenarios == 2:
        deg = {w: sum(1 for t in T if t[2] == w) for w in W}
        missing = [w for w in W if deg[w] == 0]
        if missing:
            raise MalformedTriples(f"elements of W in no triple: {missing}")
        r1_inc = [[t[2] == w for t in T] for w in W for _ in range(deg[w] - 1)]
        r2_elems = [(0, u) for u in U] + [(1, v) for v in V]
    else:
        r1_inc = [[True] * len(T) for _ in range(len(T) - n)]
        r2_elems = [(0, u) for u in U] + [(1, v) for v in V] + [(2, w) for w in W]
    n_r1, n_r2, n_d = len(r1_inc), len(r2_elems), len(T)
    if n_r1 == 0:
        raise MalformedTriples("construction has no first-stage riders (|T| = n)")
    nv = n_r1 + n_r2 + n_d
    raw = np.full((nv, nv), np.inf)
    off_d = n_r1 + n_r2
    for i, row in enumerate(r1_inc):
        raw[i, off_d:] = np.where(row, 1.0, 3.0)
    for i, (axis, e) in enumerate(r2_elems):
        raw[n_r1 + i, off_d:] = [1.0 if t[axis] == e else 3.0 for t in T]
    labels = [f"{'UVW'[a]}:{e}" for a, e in r2_elems]
    scen = [list(range(k * n, (k + 1) * n)) for k in range(n_scenarios)]
    return _closed(n_r1, labels, n_d, raw, ScenarioSet.of(scen))


def has_perfect_3dm(n: int, T) -> bool:
    for pick in combinations(T, n):
        if all(len({t[a] for t in pick}) == n for a in range(3)):
            return True
    return False


def planted_3dm(n: int, planted: bool, seed: int = 0, extra: int | None = None):
    """Random triple system over U=V=W=range(n) that has a perfect
    3-dimensional matching iff ``planted``. Every element lies in at least
    one triple. Returns (U, V, W, T)."""
    rng = _rng(seed)
    elems = list(range(n))
    extra = n if extra is None else extra
    all_triples = [(a, b, c) for a in elems for b in elems for c in elems]
    for _ in range(10_000):
        if planted:
            pu, pv = rng.permutation(n), rng.permutation(n)
            T = {(i, int(pu[i]), int(pv[i])) for i in range(n)}
        else:
            T = set()
        while len(T) < n + extra:
            T.add(all_triples[int(rng.integers(len(all_triples)))])
        T = sorted(T)
        covered = all({t[a] for t in T} == set(elems) for a in range(3))
        if covered and has_perfect_3dm(n, T) == planted:
            return elems, elems, elems, T
    raise RuntimeError("could not sample a triple system with the requested property")


def gen_from_set_cover(universe_n: int, sets: Sequence[Sequence[int]], p_cover: int
                       ) -> MetricInstance:
    """Drivers are the sets, R2 the elements (implicit k=1), and R1 holds
    m-p riders at distance 1 from every set. Element-set distance is 1 on
    membership, 3 otherwise. The optimum is 2 iff p sets cover the universe,
    else 4."""
    sets = [set(int(x) for x in s) for s in sets]
    m = len(sets)
    covered = set().union(*sets) if sets else set()
    missing = sorted(set(range(universe_n)) - covered)
    if missing:
        raise UncoveredElement(f"elements in no set: {missing}")
    if any(x < 0 or x >= universe_n for s in sets for x in s):
        raise ValueError("set element outside the universe")
    if not 1 <= p_cover < m:
        raise ValueError(f"p_cover must be in [1, {m - 1}] so that R1 is nonempty")
    n_r1 = m - p_cover
    nv = n_r1 + universe_n + m
    raw = np.full((nv, nv), np.inf)
    off_d = n_r1 + universe_n
    raw[:n_r1, off_d:] = 1.0
    for e in range(universe_n):
        raw[n_r1 + e, off_d:] = [1.0 if e in s else 3.0 for s in sets]
    return _closed(n_r1, [f"e{e}" for e in range(universe_n)], m, raw, ScenarioSet.implicit(1))


def gen_from_2partition(s_values: Sequence[int], P: float | None = None) -> MetricInstance:
    """Total-weight instance from a 2-partition input s_1..s_n (n even).

    Riders r_j (first stage), r_{n+j} (scenario 1), r_{2n+j} (scenario 2)
    and drivers delta_j, delta_{n+j} per item. r_j reaches both drivers at
    P; r_{n+j} reaches delta_j at P and delta_{n+j} at s_j; r_{2n+j}
    reaches delta_j at s_j and delta_{n+j} at P; all other rider-driver
    pairs are forbidden. P defaults to sum(s).
    """
    s = [int(x) for x in s_values]
    n = len(s)
    if n == 0 or n % 2:
        raise OddCardinality(f"need a nonzero even number of values, got {n}")
    if any(x <= 0 for x in s):
        raise ValueError("values must be positive integers")
    P = float(sum(s)) if P is None else float(P)
    n_r1, n_r2, n_d = n, 2 * n, 2 * n
    nv = n_r1 + n_r2 + n_d
    raw = np.full((nv, nv), np.inf)
    off_d = n_r1 + n_r2
    riders = n_r1 + n_r2
    # vertices of different items never interact: r_j, r_{n+j}, r_{2n+j},
    # delta_j, delta_{n+j} form item j's gadget
    item = np.concatenate([np.arange(n), np.arange(2 * n) % n, np.arange(2 * n) % n])
    forbidden = item[:, None] != item[None, :]
    forbidden[:riders, off_d:] = True
    forbidden[off_d:, :riders] = True

    def edge(r, dj, w):
        raw[r, off_d + dj] = raw[off_d + dj, r] = w
        forbidden[r, off_d + dj] = forbidden[off_d + dj, r] = False

    for j in range(n):
        edge(j, j, P)
        edge(j, n + j, P)
        edge(n + j, j, P)
        edge(n + j, n + j, s[j])
        edge(2 * n + j, j, s[j])
        edge(2 * n + j, n + j, P)
    labels = [f"a{j}" for j in range(n)] + [f"b{j}" for j in range(n)]
    scen = ScenarioSet.of([list(range(n)), list(range(n, 2 * n))])
    return _closed(n_r1, labels, n_d, raw, scen, forbidden)


def two_partition_value(s_values: Sequence[int], P: float | None = None) -> float:
    """(3P|I| + sum s)/2 for the instance built by gen_from_2partition."""
    s = [int(x) for x in s_values]
    P = float(sum(s)) if P is None else float(P)
    return (3 * P * len(s) + sum(s)) / 2
