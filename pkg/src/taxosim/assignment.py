"""Rectangular linear assignment (Hungarian / Kuhn-Munkres with potentials)."""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import EmptyMatrix, NonFiniteWeight


class Mode(enum.Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"


def _min_cost_rows(cost: np.ndarray) -> np.ndarray:
    """Shortest augmenting path assignment for ``n <= m``; returns column per row.

    Every row is assigned; columns left over stay free.
    """
    n, m = cost.shape
    u = np.zeros(n + 1)
    v = np.zeros(m + 1)
    match = np.zeros(m + 1, dtype=np.int64)  # column -> row (1-based), 0 = free
    way = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = np.full(m + 1, np.inf)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = match[j0]
            free = ~used
            free[0] = False
            reduced = cost[i0 - 1] - u[i0] - v[1:]
            better = free[1:] & (reduced < minv[1:])
            minv[1:][better] = reduced[better]
            way[1:][better] = j0
            masked = np.where(free, minv, np.inf)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            u[match[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    cols = np.full(n, -1, dtype=np.int64)
    for j in range(1, m + 1):
        if match[j]:
            cols[match[j] - 1] = j - 1
    return cols


def optimal_assignment(weights, mode: Mode = Mode.MAXIMIZE) -> tuple[np.ndarray, np.ndarray]:
    """Row and column indices of an optimal one-to-one matching of size min(m, n)."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2 or w.size == 0:
        raise EmptyMatrix(f"need a non-empty 2-D matrix, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise NonFiniteWeight("weights must be finite")
    mode = Mode(mode)
    transposed = w.shape[0] > w.shape[1]
    if transposed:
        w = w.T
    cost = -w if mode is Mode.MAXIMIZE else w
    # shift to non-negative; an additive constant per row leaves the optimum unchanged
    cost = cost - cost.min()
    cols = _min_cost_rows(cost)
    rows = np.arange(w.shape[0])
    if transposed:
        rows, cols = cols, rows
        order = np.argsort(rows)
        rows, cols = rows[order], cols[order]
    return rows, cols


def assignment_optimum(weights, mode: Mode = Mode.MAXIMIZE) -> float:
    """Total weight of an optimal assignment, summed exactly with ``math.fsum``."""
    w = np.asarray(weights, dtype=np.float64)
    rows, cols = optimal_assignment(w, mode)
    return math.fsum(w[rows, cols].tolist())
