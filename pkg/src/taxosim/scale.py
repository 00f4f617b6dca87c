"""Comorbidity scale term: penalize set-size mismatch and normalize by the smaller set."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ZeroSetSize

LOG_BASES = {"e": math.log, "2": math.log2, "10": math.log10}


@dataclass(frozen=True)
class ScaledScore:
    raw: float
    scaled: float
    size_a: int
    size_b: int


def scale_denominator(size_a: int, size_b: int, log_base: str = "e") -> float:
    if size_a < 1 or size_b < 1:
        raise ZeroSetSize(f"set sizes must be >= 1, got {size_a} and {size_b}")
    log = LOG_BASES[str(log_base)]
    return min(size_a, size_b) + log(1 + abs(size_a - size_b))


def apply_scale(raw: float, size_a: int, size_b: int, log_base: str = "e") -> ScaledScore:
    """``raw / (min(|A|, |B|) + log(1 + ||A| - |B||))``."""
    return ScaledScore(raw, raw / scale_denominator(size_a, size_b, log_base), size_a, size_b)
