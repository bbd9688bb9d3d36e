"""Bipartite matching primitives.

A weight matrix is a 2-D float array; ``FORBIDDEN`` (``inf``) marks edges
that may not be used. All functions return a :class:`Matching` whose pairs
are sorted by left index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NoPerfectMatching

FORBIDDEN = np.inf


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    total_weight: float
    bottleneck: float

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def left(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.pairs)

    @property
    def right(self) -> tuple[int, ...]:
        return tuple(j for _, j in self.pairs)


def as_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2:
        raise ValueError(f"weight matrix must be 2-D, got shape {w.shape}")
    if np.isnan(w).any():
        raise ValueError("weight matrix contains NaN")
    if (w < 0).any():
        raise ValueError("weights must be nonnegative")
    return w


def matching_from_pairs(w: np.ndarray, pairs) -> Matching:
    pairs = tuple(sorted((int(i), int(j)) for i, j in pairs))
    if not pairs:
        return Matching((), 0.0, 0.0)
    vals = [float(w[i, j]) for i, j in pairs]
    return Matching(pairs, float(sum(vals)), max(vals))


def _pairs_from_left(match_l: np.ndarray):
    return [(i, int(j)) for i, j in enumerate(match_l) if j >= 0]


def max_cardinality_matching(w) -> Matching:
    """Maximum-cardinality matching over the non-forbidden edges (Hopcroft-Karp)."""
    w = as_weights(w)
    if w.size == 0:
        return Matching((), 0.0, 0.0)
    match_l = kernels.hopcroft_karp(np.isfinite(w))
    return matching_from_pairs(w, _pairs_from_left(match_l))


def _cardinality(mask: np.ndarray) -> int:
    if mask.size == 0:
        return 0
    return int((kernels.hopcroft_karp(mask) >= 0).sum())


def min_weight_perfect_matching(w) -> Matching:
    """Minimum total weight matching that saturates every row.

    Raises NoPerfectMatching when no row-saturating matching exists over
    the allowed edges (including the case rows > cols).
    """
    w = as_weights(w)
    rows, cols = w.shape
    if rows == 0:
        return Matching((), 0.0, 0.0)
    if rows > cols or _cardinality(np.isfinite(w)) < rows:
        raise NoPerfectMatching(f"cannot saturate all {rows} rows of a {rows}x{cols} matrix")
    row_to_col, ok = kernels.hungarian(w)
    if not ok:  # pragma: no cover - excluded by the cardinality check
        raise NoPerfectMatching("assignment failed")
    return matching_from_pairs(w, enumerate(row_to_col))


def min_weight_max_cardinality_matching(w) -> Matching:
    """Among maximum-cardinality matchings, one of minimum total weight.

    Reduces to a square assignment: with t the maximum cardinality, add
    cols-t dummy rows and rows-t dummy columns joined to every real vertex
    at cost 0 (dummy-dummy forbidden). Every perfect assignment then matches
    exactly t real pairs, so its cost is the weight of a t-matching.
    """
    w = as_weights(w)
    rows, cols = w.shape
    if rows == 0 or cols == 0:
        return Matching((), 0.0, 0.0)
    t = _cardinality(np.isfinite(w))
    if t == 0:
        return Matching((), 0.0, 0.0)
    if t == rows:
        return min_weight_perfect_matching(w)
    n = rows + cols - t
    ext = np.zeros((n, n))
    ext[:rows, :cols] = w
    ext[rows:, cols:] = FORBIDDEN
    row_to_col, ok = kernels.hungarian(ext)
    if not ok:  # pragma: no cover
        raise NoPerfectMatching("extended assignment failed")
    pairs = [(i, int(j)) for i, j in enumerate(row_to_col[:rows]) if j < cols]
    return matching_from_pairs(w, pairs)


def bottleneck_feasible(w, threshold: float) -> bool:
    """True iff all rows can be matched using edges of weight <= threshold."""
    w = as_weights(w)
    rows, cols = w.shape
    if rows == 0:
        return True
    if rows > cols:
        return False
    return _cardinality(w <= threshold) == rows


def bottleneck_matching(w) -> Matching:
    """Row-saturating matching minimizing the largest edge weight.

    Binary search over the sorted distinct finite weights; the returned
    bottleneck is always one of the entries of ``w``.
    """
    w = as_weights(w)
    rows, cols = w.shape
    if rows == 0:
        return Matching((), 0.0, 0.0)
    if rows > cols:
        raise NoPerfectMatching(f"{rows} rows cannot be saturated by {cols} columns")
    levels = np.unique(w[np.isfinite(w)])
    # a saturating matching needs every row's cheapest edge and at least
    # `rows` distinct columns, so the bottleneck is at least the largest row minimum
    lo = int(np.searchsorted(levels, w.min(axis=1).max())) if levels.size else 0
    hi = levels.size - 1
    if hi < 0 or lo > hi or not bottleneck_feasible(w, levels[hi]):
        raise NoPerfectMatching("no saturating matching over allowed edges")
    while lo < hi:
        mid = (lo + hi) // 2
        if bottleneck_feasible(w, levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    mask = w <= levels[lo]
    match_l = kernels.hopcroft_karp(mask)
    return matching_from_pairs(w, _pairs_from_left(match_l))


def bottleneck_value(w) -> float:
    return bottleneck_matching(w).bottleneck
