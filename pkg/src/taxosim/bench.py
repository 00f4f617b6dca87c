"""Benchmark harness: enumerate algorithm combinations, build pairwise patient
matrices and correlate them with an expert ground truth."""

from __future__ import annotations

import csv
import fnmatch
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .cohort import GroundTruthMatrix, PatientSet, SimilarityMatrix, format_number
from .concept import CsMeasure, Direction, LiVariant, cs_block
from .errors import DimensionMismatch, UnknownCombo, ZeroVariance
from .ic import IcMeasure
from .scale import scale_denominator
from .setsim import (
    COEFFICIENTS,
    SetSimMeasure,
    normalize_with,
    setsim_bipartite,
    setsim_coefficient,
    setsim_hierarchical,
    setsim_mean_cs,
)
from .taxonomy import Taxonomy

CsOverride = Union[float, Callable[[str, str], float], None]


@dataclass(frozen=True)
class AlgorithmCombo:
    set: SetSimMeasure
    scaled: bool
    ic: IcMeasure | None = None
    cs: CsMeasure | None = None

    def __post_init__(self):
        if self.set.semantic != (self.ic is not None and self.cs is not None):
            raise ValueError(f"ic/cs must be given iff {self.set} is a semantic set measure")
        if not self.set.semantic and (self.ic is not None or self.cs is not None):
            raise ValueError(f"{self.set} takes no ic/cs")

    @property
    def id(self) -> str:
        tail = f"set={self.set},{'scaled' if self.scaled else 'unscaled'}"
        if self.set.semantic:
            return f"ic={self.ic},cs={self.cs},{tail}"
        return tail

    def __str__(self) -> str:
        return self.id

    @classmethod
    def parse(cls, text: str) -> "AlgorithmCombo":
        parts = [p.strip() for p in text.replace(":", ",").split(",") if p.strip()]
        fields: dict[str, str] = {}
        scaled = None
        for p in parts:
            if p in ("scaled", "unscaled"):
                scaled = p == "scaled"
            elif "=" in p:
                k, v = p.split("=", 1)
                fields[k.strip()] = v.strip()
            else:
                raise UnknownCombo(f"cannot parse combo {text!r}")
        try:
            set_m = SetSimMeasure(fields["set"])
            ic = IcMeasure(fields["ic"]) if "ic" in fields else None
            cs = CsMeasure(fields["cs"]) if "cs" in fields else None
            return cls(set=set_m, scaled=bool(scaled), ic=ic, cs=cs)
        except (KeyError, ValueError) as exc:
            raise UnknownCombo(f"cannot parse combo {text!r}: {exc}") from None


def enumerate_combos() -> list[AlgorithmCombo]:
    """All 80 combinations in canonical order (IC, CS, set measure, unscaled before scaled)."""
    out = []
    for ic in IcMeasure:
        for cs in CsMeasure:
            for set_m in (SetSimMeasure.MEANCS, SetSimMeasure.MBM, SetSimMeasure.HIERDIST):
                for scaled in (False, True):
                    out.append(AlgorithmCombo(set_m, scaled, ic, cs))
    for set_m in COEFFICIENTS:
        for scaled in (False, True):
            out.append(AlgorithmCombo(set_m, scaled))
    return out


CANONICAL = {c.id: k for k, c in enumerate(enumerate_combos())}


def select_combos(selector: str = "all") -> list[AlgorithmCombo]:
    """``all``, one combo id, or a glob pattern matched against canonical ids."""
    combos = enumerate_combos()
    if selector.strip() == "all":
        return combos
    try:
        one = AlgorithmCombo.parse(selector)
        return [one]
    except UnknownCombo:
        pass
    picked = [c for c in combos if fnmatch.fnmatchcase(c.id, selector)]
    if not picked:
        raise UnknownCombo(f"no combo matches {selector!r}")
    return picked


@dataclass(frozen=True)
class BenchConfig:
    li_variant: str = "original"
    normalize: str = "run"
    scale_log: str = "e"
    include_diagonal: bool = False

    def __post_init__(self):
        LiVariant(self.li_variant)
        if self.normalize not in ("run", "none"):
            raise ValueError(f"normalize must be 'run' or 'none', got {self.normalize!r}")
        if str(self.scale_log) not in ("e", "2", "10"):
            raise ValueError(f"scale_log must be e, 2 or 10, got {self.scale_log!r}")


class CohortEngine:
    """Pairwise set-similarity computation over one cohort.

    Concept scores are computed once per (IC, CS) over the union of the
    cohort's codes; every patient pair then reads a sub-block.
    """

    def __init__(
        self,
        tax: Taxonomy | None,
        cohort: Sequence[PatientSet],
        config: BenchConfig = BenchConfig(),
        cs_override: CsOverride = None,
    ):
        self.tax = tax
        self.cohort = list(cohort)
        self.config = config
        self.cs_override = cs_override
        self.codes = list(dict.fromkeys(c for p in self.cohort for c in p.codes))
        pos = {c: k for k, c in enumerate(self.codes)}
        self.members = [np.array([pos[c] for c in p.codes], dtype=np.int64) for p in self.cohort]
        self.sizes = [len(p.codes) for p in self.cohort]
        if tax is not None and cs_override is None:
            self.node_idx = tax.indices(self.codes)
        self._cs_cache: dict[tuple, np.ndarray] = {}

    def concept_scores(self, ic: IcMeasure, cs: CsMeasure) -> tuple[np.ndarray, Direction]:
        if self.cs_override is not None:
            key: tuple = ("override",)
            if key not in self._cs_cache:
                ov = self.cs_override
                if callable(ov):
                    vals = np.array([[ov(a, b) for b in self.codes] for a in self.codes], dtype=np.float64)
                else:
                    vals = np.full((len(self.codes), len(self.codes)), float(ov))
                self._cs_cache[key] = vals
            return self._cs_cache[key], Direction.SIMILARITY
        key = (ic if cs.uses_ic else None, cs)
        if key not in self._cs_cache:
            self._cs_cache[key] = cs_block(
                self.tax, ic, cs, self.node_idx, self.node_idx, LiVariant(self.config.li_variant)
            )
        return self._cs_cache[key], cs.direction

    def raw_matrix(self, set_m: SetSimMeasure, ic: IcMeasure | None = None, cs: CsMeasure | None = None) -> np.ndarray:
        n = len(self.cohort)
        out = np.zeros((n, n))
        if not set_m.semantic:
            for i in range(n):
                for j in range(i, n):
                    out[i, j] = out[j, i] = setsim_coefficient(
                        set_m, self.cohort[i].codes, self.cohort[j].codes
                    ).raw
            return out

        scores, direction = self.concept_scores(ic, cs)
        if set_m is SetSimMeasure.HIERDIST:
            if self.config.normalize == "run":
                lo, hi = float(scores.min()), float(scores.max())
                scores = normalize_with(scores, lo, hi, direction)
            elif direction is Direction.SIMILARITY:
                scores = 1.0 - scores
        for i in range(n):
            for j in range(i, n):
                block = scores[np.ix_(self.members[i], self.members[j])]
                if set_m is SetSimMeasure.MEANCS:
                    val = setsim_mean_cs(block).raw
                elif set_m is SetSimMeasure.MBM:
                    val = setsim_bipartite(block, direction).raw
                else:
                    val = setsim_hierarchical(block, check_range=self.config.normalize == "run").raw
                out[i, j] = out[j, i] = val
        return out

    def scale_matrix(self) -> np.ndarray:
        sizes = self.sizes
        n = len(sizes)
        den = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                den[i, j] = scale_denominator(sizes[i], sizes[j], self.config.scale_log)
        return den

    def matrix(self, combo: AlgorithmCombo) -> SimilarityMatrix:
        raw = self.raw_matrix(combo.set, combo.ic, combo.cs)
        return self._finish(combo, raw)

    def _finish(self, combo: AlgorithmCombo, raw: np.ndarray) -> SimilarityMatrix:
        values = raw / self.scale_matrix() if combo.scaled else raw
        return SimilarityMatrix(tuple(p.pseudonym for p in self.cohort), values)


def compute_matrix(
    tax: Taxonomy | None,
    cohort: Sequence[PatientSet],
    combo: AlgorithmCombo,
    config: BenchConfig = BenchConfig(),
    cs_override: CsOverride = None,
) -> SimilarityMatrix:
    """Pairwise (optionally scaled) set similarity for every patient pair, diagonal included."""
    return CohortEngine(tax, cohort, config, cs_override).matrix(combo)


def _pair_vectors(m: np.ndarray, t: np.ndarray, include_diagonal: bool) -> tuple[np.ndarray, np.ndarray]:
    iu = np.triu_indices(m.shape[0], k=0 if include_diagonal else 1)
    return m[iu], t[iu]


def pearson(
    m: SimilarityMatrix | np.ndarray,
    t: GroundTruthMatrix | SimilarityMatrix | np.ndarray,
    include_diagonal: bool = False,
) -> float:
    """Pearson r over the strict upper triangle (or upper triangle with diagonal)."""
    if isinstance(m, SimilarityMatrix):
        mp, mv = m.pseudonyms, m.values
    else:
        mp, mv = None, np.asarray(m, dtype=np.float64)
    if isinstance(t, GroundTruthMatrix):
        tp, tv = t.pseudonyms, t.scores
    elif isinstance(t, SimilarityMatrix):
        tp, tv = t.pseudonyms, t.values
    else:
        tp, tv = None, np.asarray(t, dtype=np.float64)
    if mv.shape != tv.shape or mv.ndim != 2 or mv.shape[0] != mv.shape[1]:
        raise DimensionMismatch(f"matrix shapes differ: {mv.shape} vs {tv.shape}")
    if mp is not None and tp is not None and tuple(mp) != tuple(tp):
        raise DimensionMismatch("pseudonym order differs")
    if mv.shape[0] < 3:
        raise DimensionMismatch("need at least 3 patients")
    x, y = _pair_vectors(mv, tv, include_diagonal)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ZeroVariance("constant similarity vector")
    xc = x - x.mean()
    yc = y - y.mean()
    r = float(np.dot(xc, yc) / np.sqrt(np.dot(xc, xc) * np.dot(yc, yc)))
    return max(-1.0, min(1.0, r))


@dataclass
class BenchmarkResult:
    config: BenchConfig
    matrices: dict[str, SimilarityMatrix] = field(default_factory=dict)
    results: list[tuple[AlgorithmCombo, float | None]] = field(default_factory=list)

    def ranked(self) -> list[tuple[AlgorithmCombo, float | None]]:
        return rank(self.results)


def rank(results: Sequence[tuple[AlgorithmCombo, float | None]]) -> list[tuple[AlgorithmCombo, float | None]]:
    """Descending r; undefined r last; ties by canonical combo order."""
    return sorted(
        results,
        key=lambda cr: (cr[1] is None, -(cr[1] if cr[1] is not None else 0.0), CANONICAL[cr[0].id]),
    )


def rank_report(results: Sequence[tuple[AlgorithmCombo, float | None]], config: BenchConfig | None = None) -> tuple[str, str]:
    """Ranking as (CSV text, JSON text); the JSON embeds the run configuration."""
    ranked = rank(results)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["combo", "r"])
    for combo, r in ranked:
        w.writerow([combo.id, "nan" if r is None else format_number(r)])
    doc = {
        "config": asdict(config) if config is not None else None,
        "ranking": [{"combo": c.id, "r": r} for c, r in ranked],
    }
    return buf.getvalue(), json.dumps(doc, indent=2, sort_keys=True) + "\n"


_WORKER: CohortEngine | None = None


def _init_worker(engine: CohortEngine) -> None:
    global _WORKER
    _WORKER = engine


def _run_group(key: tuple) -> np.ndarray:
    set_m, ic, cs = key
    return _WORKER.raw_matrix(set_m, ic, cs)


def run_benchmark(
    tax: Taxonomy | None,
    cohort: Sequence[PatientSet],
    truth: GroundTruthMatrix | None,
    combos: Sequence[AlgorithmCombo] | None = None,
    config: BenchConfig = BenchConfig(),
    jobs: int = 1,
    cs_override: CsOverride = None,
) -> BenchmarkResult:
    """Compute every requested combo's matrix and its correlation with ``truth``.

    Scaled and unscaled variants share one raw computation, as do the two IC
    variants of IC-free concept measures. ``jobs`` > 1 fans the distinct raw
    computations out to worker processes; results are gathered in canonical
    order, so output does not depend on ``jobs``.
    """
    combos = list(enumerate_combos() if combos is None else combos)
    combos.sort(key=lambda c: CANONICAL[c.id])
    engine = CohortEngine(tax, cohort, config, cs_override)

    def group_key(c: AlgorithmCombo) -> tuple:
        if not c.set.semantic:
            return (c.set, None, None)
        if cs_override is not None:
            return (c.set, None, CsMeasure.WUPALMER)
        return (c.set, c.ic if c.cs.uses_ic else IcMeasure.LEVEL, c.cs)

    keys = list(dict.fromkeys(group_key(c) for c in combos))
    if jobs == 0:
        jobs = os.cpu_count() or 1
    if jobs > 1 and len(keys) > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(engine,)) as pool:
            raws = dict(zip(keys, pool.map(_run_group, keys)))
    else:
        raws = {k: engine.raw_matrix(*k) for k in keys}

    result = BenchmarkResult(config)
    for combo in combos:
        m = engine._finish(combo, raws[group_key(combo)])
        result.matrices[combo.id] = m
        r = None
        if truth is not None:
            try:
                r = pearson(m, truth, config.include_diagonal)
            except ZeroVariance:
                r = None
        result.results.append((combo, r))
    return result
