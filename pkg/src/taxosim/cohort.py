"""Cohort and ground-truth ingestion, plus the matrix containers written to disk."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AsymmetricTruth,
    DimensionMismatch,
    DuplicatePseudonym,
    EmptyCodeList,
    MissingPseudonym,
    OutOfRangeScore,
    TaxosimError,
    UnknownCode,
)
from .taxonomy import Taxonomy, normalize_code

TRUTH_MIN, TRUTH_MAX = 0.0, 10.0
SYMMETRY_TOL = 1e-9


def format_number(x: float) -> str:
    """10 significant digits, locale independent."""
    s = f"{x:.10g}"
    return "0" if s == "-0" else s


@dataclass(frozen=True)
class PatientSet:
    pseudonym: str
    codes: tuple[str, ...]

    def __post_init__(self):
        if not self.codes:
            raise EmptyCodeList(offenders=[self.pseudonym])

    def __len__(self) -> int:
        return len(self.codes)


@dataclass(frozen=True)
class SimilarityMatrix:
    pseudonyms: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        n = len(self.pseudonyms)
        if self.values.shape != (n, n):
            raise DimensionMismatch(f"{self.values.shape} matrix for {n} pseudonyms")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pseudonym", *self.pseudonyms])
        for name, row in zip(self.pseudonyms, self.values):
            w.writerow([name, *map(format_number, row)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SimilarityMatrix":
        names, values = _read_square(text)
        return cls(tuple(names), values)


@dataclass(frozen=True)
class GroundTruthMatrix:
    pseudonyms: tuple[str, ...]
    scores: np.ndarray


def _rows(text: str) -> list[list[str]]:
    if text.startswith("﻿"):
        text = text[1:]
    out = []
    for row in csv.reader(io.StringIO(text)):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        out.append([cell.strip() for cell in row])
    return out


def _read_square(text: str) -> tuple[list[str], np.ndarray]:
    rows = _rows(text)
    if not rows:
        raise TaxosimError("empty matrix document")
    header = rows[0][1:]
    body = rows[1:]
    labels = [r[0] for r in body]
    try:
        values = np.array([[float(x) for x in r[1:]] for r in body], dtype=np.float64)
    except ValueError as exc:
        raise TaxosimError(f"non-numeric matrix cell: {exc}") from None
    if values.shape != (len(labels), len(header)):
        raise DimensionMismatch(f"ragged matrix: {len(header)} columns in header")
    if labels != header:
        raise DimensionMismatch("row and column labels differ")
    return labels, values


def load_cohort(text: str, tax: Taxonomy | None = None, unknown_codes: str = "error") -> list[PatientSet]:
    """Parse ``pseudonym,code1;code2;...`` lines into patient sets.

    Duplicate codes collapse to one (first occurrence order kept). With a
    taxonomy, unknown codes either raise ``UnknownCode`` listing all of them
    (``"error"``) or are dropped (``"skip"``).
    """
    if unknown_codes not in ("error", "skip"):
        raise ValueError(f"unknown_codes must be 'error' or 'skip', got {unknown_codes!r}")
    patients: list[PatientSet] = []
    seen: set[str] = set()
    unknown: set[str] = set()
    for i, row in enumerate(_rows(text)):
        if i == 0 and [c.lower() for c in row[:2]] == ["pseudonym", "codes"]:
            continue
        name = row[0]
        if name in seen:
            raise DuplicatePseudonym(offenders=[name])
        seen.add(name)
        field = ",".join(row[1:])
        codes = list(dict.fromkeys(c for c in map(normalize_code, field.split(";")) if c))
        if tax is not None:
            missing = [c for c in codes if c not in tax]
            if missing:
                unknown.update(missing)
                codes = [c for c in codes if c in tax]
        if not codes and not (unknown and unknown_codes == "error"):
            raise EmptyCodeList(f"{name} has no usable codes", offenders=[name])
        if codes:
            patients.append(PatientSet(name, tuple(codes)))
    if unknown and unknown_codes == "error":
        raise UnknownCode(offenders=sorted(unknown))
    return patients


def load_truth(text: str, pseudonyms: Sequence[str]) -> GroundTruthMatrix:
    """Read an expert matrix (header row and column of pseudonyms) aligned to ``pseudonyms``."""
    labels, values = _read_square(text)
    pos = {name: k for k, name in enumerate(labels)}
    missing = [p for p in pseudonyms if p not in pos]
    if missing:
        raise MissingPseudonym(offenders=missing)
    bad = np.argwhere((values < TRUTH_MIN) | (values > TRUTH_MAX) | ~np.isfinite(values))
    if len(bad):
        i, j = bad[0]
        raise OutOfRangeScore(
            f"score {values[i, j]} for ({labels[i]}, {labels[j]}) outside [0, 10]",
            offenders=[labels[i], labels[j]],
        )
    asym = np.argwhere(np.abs(values - values.T) > SYMMETRY_TOL)
    if len(asym):
        i, j = asym[0]
        raise AsymmetricTruth(
            f"({labels[i]}, {labels[j]}) = {values[i, j]} but mirrored = {values[j, i]}",
            offenders=[labels[i], labels[j]],
        )
    idx = [pos[p] for p in pseudonyms]
    return GroundTruthMatrix(tuple(pseudonyms), values[np.ix_(idx, idx)])


def cohort_to_csv(patients: Sequence[PatientSet]) -> str:
    return "".join(f"{p.pseudonym},{';'.join(p.codes)}\n" for p in patients)


def truth_to_csv(truth: GroundTruthMatrix) -> str:
    return SimilarityMatrix(truth.pseudonyms, truth.scores).to_csv()
