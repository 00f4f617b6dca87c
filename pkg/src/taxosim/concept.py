"""Pairwise concept similarity and distance measures.

All measures are evaluated on blocks of node indices with numpy; the scalar
:func:`cs` is a 1x1 block so both paths share one formula.
"""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .errors import UnknownCode
from .ic import IcMeasure, ic_table
from .taxonomy import Taxonomy


class Direction(enum.Enum):
    SIMILARITY = "similarity"
    DISTANCE = "distance"

    def __str__(self) -> str:
        return self.value


class LiVariant(enum.Enum):
    ORIGINAL = "original"  # exp(-0.2 * l)
    TABLE = "table"  # exp(+0.2 * l)

    def __str__(self) -> str:
        return self.value


class CsMeasure(enum.Enum):
    NGUYEN = "nguyen"
    PATH = "path"
    LCH = "lch"
    SWUPALMER = "swupalmer"
    LI = "li"
    WUPALMER = "wupalmer"

    def __str__(self) -> str:
        return self.value

    @property
    def direction(self) -> Direction:
        return Direction.DISTANCE if self is CsMeasure.NGUYEN else Direction.SIMILARITY

    @property
    def uses_ic(self) -> bool:
        return self not in (CsMeasure.NGUYEN, CsMeasure.PATH)


LI_ALPHA = 0.2
LI_BETA = 0.6


def cs_block(
    tax: Taxonomy,
    icm: IcMeasure,
    measure: CsMeasure,
    rows: np.ndarray,
    cols: np.ndarray,
    li_variant: LiVariant = LiVariant.ORIGINAL,
) -> np.ndarray:
    """Concept scores for every (row, col) pair of node indices."""
    measure = CsMeasure(measure)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    lca = tax.lca_matrix(rows, cols)
    depth = tax.depths.astype(np.float64)
    dmax = float(tax.max_depth)
    d_a = depth[rows][:, None]
    d_b = depth[cols][None, :]
    d_l = depth[lca]

    if measure is CsMeasure.NGUYEN:
        path = d_a + d_b - 2.0 * d_l
        return np.log(np.maximum(path - 1.0, 0.0) * (dmax - d_l) + 1.0)

    if measure is CsMeasure.PATH:
        denom = d_a + d_b
        with np.errstate(divide="ignore", invalid="ignore"):
            out = dmax / denom
        # only root vs root has zero depth sum
        return np.where(denom == 0, dmax, out)

    table = ic_table(tax, icm)
    ic_a = table[rows][:, None]
    ic_b = table[cols][None, :]
    ic_l = table[lca]

    if measure is CsMeasure.LCH:
        top = float(table.max())
        if top == 0.0:
            return np.zeros(lca.shape)
        return -np.log((ic_a + ic_b - 2.0 * ic_l + 1.0) / (2.0 * top))

    if measure is CsMeasure.SWUPALMER:
        if dmax == 0.0:
            return np.ones(lca.shape)
        return 1.0 - (dmax - ic_l) / dmax

    if measure is CsMeasure.LI:
        sign = -1.0 if LiVariant(li_variant) is LiVariant.ORIGINAL else 1.0
        spread = ic_a + ic_b - 2.0 * ic_l
        return np.exp(sign * LI_ALPHA * spread) * np.tanh(LI_BETA * ic_l)

    if measure is CsMeasure.WUPALMER:
        total = ic_a + ic_b
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 2.0 * ic_l / total
        same = rows[:, None] == cols[None, :]
        return np.where(total == 0, np.where(same, 1.0, 0.0), out)

    raise ValueError(f"unsupported measure {measure!r}")


def cs(
    tax: Taxonomy,
    icm: IcMeasure,
    measure: CsMeasure,
    a: str,
    b: str,
    li_variant: LiVariant = LiVariant.ORIGINAL,
) -> float:
    i, j = tax.index(a), tax.index(b)
    return float(cs_block(tax, icm, measure, np.array([i]), np.array([j]), li_variant)[0, 0])


def cs_matrix(
    tax: Taxonomy,
    icm: IcMeasure,
    measure: CsMeasure,
    set_a: Sequence[str],
    set_b: Sequence[str],
    li_variant: LiVariant = LiVariant.ORIGINAL,
) -> np.ndarray:
    """``|A| x |B|`` matrix of concept scores; unknown codes are reported together."""
    missing = sorted({c for c in list(set_a) + list(set_b) if c not in tax})
    if missing:
        raise UnknownCode(offenders=missing)
    return cs_block(tax, icm, measure, tax.indices(set_a), tax.indices(set_b), li_variant)
