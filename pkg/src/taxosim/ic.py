"""Information content of taxonomy concepts (level-based and Sanchez)."""

from __future__ import annotations

import enum

import numpy as np

from .taxonomy import Taxonomy


class IcMeasure(enum.Enum):
    LEVEL = "level"
    SANCHEZ = "sanchez"

    def __str__(self) -> str:
        return self.value


def ic_table(tax: Taxonomy, measure: IcMeasure) -> np.ndarray:
    """IC of every node of ``tax``, in node-index order.

    Sanchez uses ``-ln(((leaves/subsumers) + 1) / (total_leaves + 1))`` so the
    root scores exactly 0 and every value is non-negative.
    """
    measure = IcMeasure(measure)
    key = ("ic", measure)
    if key in tax.memo:
        return tax.memo[key]
    depth = tax.depths.astype(np.float64)
    if measure is IcMeasure.LEVEL:
        values = depth.copy()
    else:
        ratio = tax.leaf_counts / (depth + 1.0)
        values = -np.log((ratio + 1.0) / (tax.total_leaves + 1.0))
        values = values + 0.0  # -0.0 at the root
    values.flags.writeable = False
    tax.memo[key] = values
    return values


def ic(tax: Taxonomy, measure: IcMeasure, code: str) -> float:
    return float(ic_table(tax, measure)[tax.index(code)])


def ic_max(tax: Taxonomy, measure: IcMeasure) -> float:
    return float(ic_table(tax, measure).max())
