"""Problem model: metric instances, scenario sets, stage costs.

Vertices are laid out as R1 (first-stage riders), then R2 (the universe
of second-stage riders), then D (drivers). Scenario members are local
R2 indices ``0..n-1`` and drivers are local indices ``0..n_d-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (DisconnectedVertices, InsufficientDrivers, NonUniformScenarios,
                     ScenarioKindError)
from .matching import FORBIDDEN, Matching, bottleneck_value, min_weight_perfect_matching

TOL = 1e-9


@dataclass(frozen=True)
class ScenarioSet:
    """Either an explicit list of rider sets or all subsets of R2 of size <= k."""

    explicit: tuple[tuple[int, ...], ...] | None = None
    k: int | None = None

    def __post_init__(self):
        if (self.explicit is None) == (self.k is None):
            raise ValueError("ScenarioSet needs exactly one of explicit / k")
        if self.explicit is not None:
            object.__setattr__(self, "explicit",
                               tuple(tuple(sorted(int(r) for r in s)) for s in self.explicit))

    @classmethod
    def of(cls, scenarios: Iterable[Iterable[int]]) -> "ScenarioSet":
        return cls(explicit=tuple(tuple(s) for s in scenarios))

    @classmethod
    def implicit(cls, k: int) -> "ScenarioSet":
        return cls(k=int(k))

    @property
    def is_explicit(self) -> bool:
        return self.explicit is not None

    def uniform_size(self) -> int:
        if not self.is_explicit:
            return self.k
        sizes = {len(s) for s in self.explicit}
        if len(sizes) != 1:
            raise NonUniformScenarios(f"scenario sizes differ: {sorted(sizes)}")
        return sizes.pop()

    def max_size(self) -> int:
        return self.k if not self.is_explicit else max((len(s) for s in self.explicit), default=0)

    def riders(self, n_r2: int) -> tuple[int, ...]:
        """Union of all scenarios."""
        if not self.is_explicit:
            return tuple(range(n_r2))
        return tuple(sorted({r for s in self.explicit for r in s}))


@dataclass(frozen=True, eq=False)
class MetricInstance:
    n_r1: int
    r2_labels: tuple[str, ...]
    n_d: int
    dist: np.ndarray
    scenario_set: ScenarioSet

    def __post_init__(self):
        dist = np.array(self.dist, dtype=np.float64)
        n_v = self.n_r1 + len(self.r2_labels) + self.n_d
        if dist.shape != (n_v, n_v):
            raise ValueError(f"dist must be {n_v}x{n_v}, got {dist.shape}")
        if self.n_r1 < 1:
            raise ValueError("at least one first-stage rider is required")
        dist.setflags(write=False)
        object.__setattr__(self, "r2_labels", tuple(str(x) for x in self.r2_labels))
        object.__setattr__(self, "dist", dist)
        n = len(self.r2_labels)
        sc = self.scenario_set
        if sc.is_explicit:
            for s in sc.explicit:
                if any(r < 0 or r >= n for r in s):
                    raise ValueError(f"scenario {s} references riders outside R2")

    # index helpers
    @property
    def n_r2(self) -> int:
        return len(self.r2_labels)

    @property
    def r2_offset(self) -> int:
        return self.n_r1

    @property
    def d_offset(self) -> int:
        return self.n_r1 + self.n_r2

    @property
    def n_vertices(self) -> int:
        return self.d_offset + self.n_d

    def r2_index(self, riders) -> np.ndarray:
        return self.r2_offset + np.asarray(riders, dtype=np.int64).reshape(-1)

    def d_index(self, drivers) -> np.ndarray:
        return self.d_offset + np.asarray(drivers, dtype=np.int64).reshape(-1)

    def r1_to_d(self, drivers=None) -> np.ndarray:
        """Distances from R1 rows to the given drivers (all by default)."""
        cols = self.d_index(range(self.n_d) if drivers is None else drivers)
        return self.dist[:self.n_r1][:, cols]

    def r2_to_d(self, riders=None, drivers=None) -> np.ndarray:
        rows = self.r2_index(range(self.n_r2) if riders is None else riders)
        cols = self.d_index(range(self.n_d) if drivers is None else drivers)
        return self.dist[np.ix_(rows, cols)]

    def r2_to_r2(self, a, b) -> np.ndarray:
        return self.dist[np.ix_(self.r2_index(a), self.r2_index(b))]

    def d_to_d(self, a=None, b=None) -> np.ndarray:
        a = range(self.n_d) if a is None else a
        b = range(self.n_d) if b is None else b
        return self.dist[np.ix_(self.d_index(a), self.d_index(b))]

    def with_scenarios(self, scenario_set: ScenarioSet) -> "MetricInstance":
        return MetricInstance(self.n_r1, self.r2_labels, self.n_d, self.dist, scenario_set)

    def scenarios(self) -> tuple[tuple[int, ...], ...]:
        if not self.scenario_set.is_explicit:
            raise ScenarioKindError("instance has implicit scenarios")
        return self.scenario_set.explicit


@dataclass(frozen=True)
class FirstStageDecision:
    """Driver set D1 and its matching to R1 (pairs are (R1 index, driver index))."""

    drivers: tuple[int, ...]
    matching: Matching
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def available(self, n_d: int) -> tuple[int, ...]:
        chosen = set(self.drivers)
        return tuple(j for j in range(n_d) if j not in chosen)


@dataclass(frozen=True)
class SolveReport:
    cost1: float
    per_scenario_cost2: dict
    worst_cost2: float
    total: float
    solver_name: str = ""
    opt2_guess: float | None = None
    worst_scenario: tuple[int, ...] | None = None
    decision: FirstStageDecision | None = None


def decision_from_drivers(inst: MetricInstance, drivers: Iterable[int], **meta) -> FirstStageDecision:
    """Build a decision for a driver set, matching R1 onto it optimally."""
    drivers = tuple(sorted(int(j) for j in drivers))
    if len(drivers) != inst.n_r1 or len(set(drivers)) != len(drivers):
        raise ValueError(f"D1 must contain {inst.n_r1} distinct drivers, got {drivers}")
    if any(j < 0 or j >= inst.n_d for j in drivers):
        raise ValueError(f"driver index out of range in {drivers}")
    m = min_weight_perfect_matching(inst.r1_to_d(drivers))
    pairs = tuple((i, drivers[j]) for i, j in m.pairs)
    return FirstStageDecision(drivers, Matching(pairs, m.total_weight, m.bottleneck), dict(meta))


def as_decision(inst: MetricInstance, d1) -> FirstStageDecision:
    if isinstance(d1, FirstStageDecision):
        return d1
    return decision_from_drivers(inst, d1)


def cost1(inst: MetricInstance, d1) -> float:
    """Average edge weight of the optimal matching between R1 and D1 (recomputed)."""
    drivers = d1.drivers if isinstance(d1, FirstStageDecision) else tuple(d1)
    m = min_weight_perfect_matching(inst.r1_to_d(list(drivers)))
    return m.total_weight / inst.n_r1


def cost2(inst: MetricInstance, available: Sequence[int], s: Sequence[int]) -> float:
    """Bottleneck value of matching riders ``s`` into drivers ``available``."""
    s = list(s)
    available = list(available)
    if len(available) < len(s):
        raise InsufficientDrivers(f"{len(s)} riders but only {len(available)} drivers available")
    if not s:
        return 0.0
    return bottleneck_value(inst.r2_to_d(s, available))


def surplus(inst: MetricInstance) -> int:
    """l = |D| - |R1| - k."""
    return inst.n_d - inst.n_r1 - inst.scenario_set.uniform_size()


def validate(inst: MetricInstance, max_report: int = 50) -> list[str]:
    """List every violated instance invariant (empty when the instance is sound).

    Infinite entries are the forbidden-pair marker; a triangle whose long
    side is forbidden is not a violation.
    """
    out: list[str] = []
    d = inst.dist
    n = d.shape[0]
    if np.isnan(d).any():
        out.append("distance matrix contains NaN")
        return out
    for i in np.flatnonzero(np.diag(d) != 0)[:max_report]:
        out.append(f"dist({i},{i}) = {d[i, i]!r}, expected 0")
    for i, j in np.argwhere(d < 0)[:max_report]:
        out.append(f"negative distance dist({i},{j}) = {d[i, j]!r}")
    asym = np.argwhere(np.triu(d != d.T, 1))
    for i, j in asym[:max_report]:
        out.append(f"asymmetric pair ({i},{j}): {d[i, j]!r} vs {d[j, i]!r}")
    n_tri = 0
    for b in range(n):
        via = d[:, b, None] + d[None, b, :]
        bad = np.argwhere(np.isfinite(d) & (d > via + TOL))
        for a, c in bad:
            if n_tri < max_report:
                out.append(f"triangle violation ({a},{b},{c}): "
                           f"dist({a},{c})={d[a, c]!r} > {d[a, b]!r} + {d[b, c]!r}")
            n_tri += 1
    if n_tri > max_report:
        out.append(f"... {n_tri - max_report} more triangle violations")
    sc = inst.scenario_set
    if sc.is_explicit:
        for idx, s in enumerate(sc.explicit):
            if not s:
                out.append(f"scenario {idx} is empty")
            if len(set(s)) != len(s):
                out.append(f"scenario {idx} repeats a rider")
    elif not 1 <= sc.k <= inst.n_r2:
        out.append(f"implicit k={sc.k} outside [1, {inst.n_r2}]")
    return out


def metric_closure(raw, forbidden=None) -> np.ndarray:
    """All-pairs shortest-path completion of a partial distance table.

    ``raw`` uses ``inf`` (or NaN) for unknown entries. Pairs flagged in the
    boolean ``forbidden`` mask are excluded as edges and stay ``FORBIDDEN``
    in the result; every other pair must end up finite.
    """
    d = np.array(raw, dtype=np.float64, copy=True)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("raw distance table must be square")
    d[np.isnan(d)] = np.inf
    if (d < 0).any():
        raise ValueError("raw distances must be nonnegative")
    d = np.minimum(d, d.T)
    if forbidden is not None:
        forbidden = np.asarray(forbidden, dtype=bool)
        forbidden = forbidden | forbidden.T
        d[forbidden] = np.inf
    np.fill_diagonal(d, 0.0)
    d = kernels.floyd_warshall(d)
    if forbidden is not None:
        d[forbidden] = FORBIDDEN
        open_pairs = ~forbidden
    else:
        open_pairs = np.ones_like(d, dtype=bool)
    gaps = np.argwhere(open_pairs & ~np.isfinite(d))
    if gaps.size:
        i, j = gaps[0]
        raise DisconnectedVertices(f"vertices {i} and {j} are not connected ({len(gaps) // 2} pairs)")
    return d
