"""Set-level similarity: semantic aggregations of concept scores and hard coefficients."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Collection

import numpy as np

from .assignment import Mode, assignment_optimum
from .concept import Direction
from .errors import EmptyMatrix, EmptySet, OutOfRangeDistance


class SetSimMeasure(enum.Enum):
    MEANCS = "meancs"
    MBM = "mbm"
    HIERDIST = "hierdist"
    OVERLAP = "overlap"
    COSINE = "cosine"
    DICE = "dice"
    JACCARD = "jaccard"

    def __str__(self) -> str:
        return self.value

    @property
    def semantic(self) -> bool:
        return self in (SetSimMeasure.MEANCS, SetSimMeasure.MBM, SetSimMeasure.HIERDIST)


COEFFICIENTS = (SetSimMeasure.OVERLAP, SetSimMeasure.COSINE, SetSimMeasure.DICE, SetSimMeasure.JACCARD)


@dataclass(frozen=True)
class SetScore:
    raw: float
    size_a: int
    size_b: int


def _as_matrix(csm) -> np.ndarray:
    m = np.asarray(csm, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise EmptyMatrix(f"need a non-empty 2-D matrix, got shape {m.shape}")
    return m


def setsim_mean_cs(csm) -> SetScore:
    """Half the sum of all concept scores over ``|A| + |B|``.

    Identical singletons score 0.25, not 1.
    """
    m = _as_matrix(csm)
    a, b = m.shape
    return SetScore(0.5 * math.fsum(m.ravel().tolist()) / (a + b), a, b)


def setsim_bipartite(csm, direction: Direction = Direction.SIMILARITY) -> SetScore:
    """Optimal one-to-one matching total: maximized for similarities, minimized for distances."""
    m = _as_matrix(csm)
    mode = Mode.MAXIMIZE if Direction(direction) is Direction.SIMILARITY else Mode.MINIMIZE
    return SetScore(assignment_optimum(m, mode), *m.shape)


def to_distance(values, direction: Direction = Direction.SIMILARITY) -> np.ndarray:
    """Min-max normalize a batch into [0, 1] distances.

    Similarities are flipped (``1 - normalized``); distance-valued batches are
    only rescaled. A constant batch maps to all zeros.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise EmptyMatrix("empty batch")
    lo, hi = float(v.min()), float(v.max())
    if hi == lo:
        return np.zeros_like(v)
    norm = (v - lo) / (hi - lo)
    if Direction(direction) is Direction.SIMILARITY:
        return 1.0 - norm
    return norm


def normalize_with(values, lo: float, hi: float, direction: Direction) -> np.ndarray:
    """Like :func:`to_distance`, but with the batch range supplied by the caller."""
    v = np.asarray(values, dtype=np.float64)
    if hi == lo:
        return np.zeros_like(v)
    norm = np.clip((v - lo) / (hi - lo), 0.0, 1.0)
    if Direction(direction) is Direction.SIMILARITY:
        return 1.0 - norm
    return norm


def hierarchical_distance(distances, check_range: bool = True) -> float:
    d = _as_matrix(distances)
    if check_range and (d.min() < 0.0 or d.max() > 1.0):
        raise OutOfRangeDistance(f"distances must lie in [0, 1], got [{d.min()}, {d.max()}]")
    a, b = d.shape
    total = math.fsum(d.min(axis=1).tolist()) + math.fsum(d.min(axis=0).tolist())
    return total / (a + b)


def setsim_hierarchical(distances, check_range: bool = True) -> SetScore:
    """Symmetric average closest-counterpart distance, reported as ``1 - HD``."""
    d = _as_matrix(distances)
    return SetScore(1.0 - hierarchical_distance(d, check_range), *d.shape)


def setsim_coefficient(kind: SetSimMeasure, set_a: Collection[str], set_b: Collection[str]) -> SetScore:
    a, b = set(set_a), set(set_b)
    if not a or not b:
        raise EmptySet("both sets must be non-empty")
    kind = SetSimMeasure(kind)
    shared = len(a & b)
    if kind is SetSimMeasure.OVERLAP:
        raw = shared / min(len(a), len(b))
    elif kind is SetSimMeasure.COSINE:
        raw = shared / math.sqrt(len(a) * len(b))
    elif kind is SetSimMeasure.DICE:
        raw = 2 * shared / (len(a) + len(b))
    elif kind is SetSimMeasure.JACCARD:
        raw = shared / len(a | b)
    else:
        raise ValueError(f"{kind} is not a coefficient measure")
    return SetScore(raw, len(a), len(b))
