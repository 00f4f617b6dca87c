"""Synthetic taxonomies, cohorts and ground truths for tests and demos.

Default cohorts have 29 patients with about 35 codes each (sd about 24,
range 1-94). Only these shape parameters are fixed; the codes are random.
"""

from __future__ import annotations

import numpy as np

from .cohort import GroundTruthMatrix, PatientSet
from .taxonomy import Taxonomy

ICD_CHAIN = [
    ("ICD-10-GM", None),
    ("II", "ICD-10-GM"),
    ("C00-C97", "II"),
    ("C00-C75", "C00-C97"),
    ("C15-C26", "C00-C75"),
    ("C25", "C15-C26"),
    ("C25.0", "C25"),
]


def icd_chain() -> Taxonomy:
    """Root-to-C25.0 path of ICD-10-GM; C25.0 sits at depth 6."""
    return Taxonomy.from_edges(ICD_CHAIN)


def random_taxonomy(n_nodes: int, seed: int = 0, max_depth: int | None = None) -> Taxonomy:
    """Random recursive tree: each new node hangs under a uniformly chosen earlier node."""
    rng = np.random.default_rng(seed)
    depth = [0]
    edges: list[tuple[str, str | None]] = [("R", None)]
    names = ["R"]
    for k in range(1, n_nodes):
        while True:
            p = int(rng.integers(0, k))
            if max_depth is None or depth[p] < max_depth:
                break
        name = f"N{k:04d}"
        names.append(name)
        depth.append(depth[p] + 1)
        edges.append((name, names[p]))
    return Taxonomy.from_edges(edges)


def icd_like_taxonomy(n_nodes: int = 500, depth: int = 6, seed: int = 0) -> Taxonomy:
    """Tree whose levels grow geometrically down to ``depth``, roughly ICD-shaped."""
    rng = np.random.default_rng(seed)
    # level sizes growing geometrically, summing to n_nodes - 1
    growth = np.geomspace(1.0, 8.0, depth)
    sizes = np.maximum(1, np.round(growth / growth.sum() * (n_nodes - 1))).astype(int)
    sizes[-1] += (n_nodes - 1) - sizes.sum()
    edges: list[tuple[str, str | None]] = [("ROOT", None)]
    prev = ["ROOT"]
    for level, size in enumerate(sizes, start=1):
        cur = []
        # every previous-level node gets at least one child while possible
        parents = list(prev) + list(rng.choice(prev, size=max(0, size - len(prev))))
        for k, p in enumerate(parents[:size]):
            name = f"L{level}.{k:03d}"
            edges.append((name, p))
            cur.append(name)
        prev = cur
    return Taxonomy.from_edges(edges)


def cohort_sizes(n: int, rng: np.random.Generator, mean: float = 35.0, sd: float = 24.0,
                 lo: int = 1, hi: int = 94) -> np.ndarray:
    shape = (mean / sd) ** 2
    scale = sd**2 / mean
    sizes = np.clip(np.round(rng.gamma(shape, scale, size=n)), lo, hi).astype(int)
    sizes[0], sizes[-1] = lo, hi  # pin the documented extremes
    return sizes


def synthetic_cohort(
    tax: Taxonomy,
    n_patients: int = 29,
    seed: int = 0,
    n_profiles: int = 4,
    focus: float = 0.8,
    sizes=None,
) -> tuple[list[PatientSet], np.ndarray]:
    """Random patients, each drawn mostly from one of ``n_profiles`` subtrees.

    Returns the patients and a ``(n_patients, n_profiles + 1)`` matrix of code
    fractions per profile (last column: codes outside every profile).
    """
    rng = np.random.default_rng(seed)
    leaves = tax.leaves()
    if sizes is None:
        sizes = cohort_sizes(n_patients, rng, hi=min(94, len(leaves)))
    sizes = np.minimum(np.asarray(sizes), len(leaves))

    # profile subtrees: the biggest subtrees directly under the root
    top = sorted(tax.children(tax.root), key=lambda c: -tax.leaf_count_under(c))[:n_profiles]
    member = {}
    for k, head in enumerate(top):
        for leaf in leaves:
            if head in tax.ancestors(leaf):
                member[leaf] = k
    pools = [[l for l in leaves if member.get(l) == k] for k in range(len(top))]

    patients, fractions = [], np.zeros((len(sizes), len(top) + 1))
    for i, size in enumerate(sizes):
        home = i % len(top)
        chosen: dict[str, None] = {}
        while len(chosen) < size:
            pool = pools[home] if rng.random() < focus else leaves
            chosen.setdefault(pool[int(rng.integers(len(pool)))], None)
        codes = tuple(chosen)
        for c in codes:
            fractions[i, member.get(c, len(top))] += 1
        fractions[i] /= len(codes)
        patients.append(PatientSet(f"P{i + 1:02d}", codes))
    return patients, fractions


def profile_truth(patients, fractions: np.ndarray) -> GroundTruthMatrix:
    """Expert-like truth: 10 x cosine of per-patient profile fractions (size independent)."""
    norm = fractions / np.linalg.norm(fractions, axis=1, keepdims=True)
    scores = np.clip(10.0 * norm @ norm.T, 0.0, 10.0)
    scores = (scores + scores.T) / 2.0
    return GroundTruthMatrix(tuple(p.pseudonym for p in patients), scores)


def truth_from_values(patients, values: np.ndarray) -> GroundTruthMatrix:
    return GroundTruthMatrix(tuple(p.pseudonym for p in patients), np.asarray(values, dtype=np.float64))
