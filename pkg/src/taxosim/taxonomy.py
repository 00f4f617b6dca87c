"""Rooted tree taxonomy with eagerly computed depth, ancestor and leaf indices."""

from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CycleDetected,
    DuplicateChild,
    EmptyDocument,
    MultipleRoots,
    TaxosimError,
    UnknownCode,
)


class MalformedLine(TaxosimError):
    pass


def normalize_code(code: str) -> str:
    return code.strip()


class Taxonomy:
    """Immutable single-parent concept tree.

    Nodes are stored in breadth-first order from the root (children sorted by
    code), so two taxonomies with the same edges have identical indices.
    """

    def __init__(self, parent_of: dict[str, str | None]):
        roots = sorted(c for c, p in parent_of.items() if p is None)
        if len(roots) > 1:
            raise MultipleRoots(offenders=roots)
        if not roots:
            raise CycleDetected(offenders=sorted(parent_of))

        children: dict[str, list[str]] = {c: [] for c in parent_of}
        for c, p in parent_of.items():
            if p is not None:
                children[p].append(c)

        order: list[str] = []
        queue = deque(roots)
        while queue:
            node = queue.popleft()
            order.append(node)
            queue.extend(sorted(children[node]))
        if len(order) != len(parent_of):
            seen = set(order)
            raise CycleDetected(offenders=sorted(c for c in parent_of if c not in seen))

        self._codes = tuple(order)
        self._index = {c: i for i, c in enumerate(order)}
        n = len(order)
        parent = np.full(n, -1, dtype=np.int64)
        depth = np.zeros(n, dtype=np.int64)
        for i, c in enumerate(order):
            p = parent_of[c]
            if p is not None:
                parent[i] = self._index[p]
                depth[i] = depth[parent[i]] + 1
        self._children = tuple(
            tuple(self._index[k] for k in sorted(children[c])) for c in order
        )
        leaves = np.zeros(n, dtype=np.int64)
        for i in range(n - 1, -1, -1):
            if not self._children[i]:
                leaves[i] = 1
            if parent[i] >= 0:
                leaves[parent[i]] += leaves[i]

        self._parent = parent
        self._depth = depth
        self._leaves = leaves
        for arr in (parent, depth, leaves):
            arr.flags.writeable = False
        self.root = order[0]
        self.max_depth = int(depth.max())
        self.total_leaves = int(leaves[0])
        self._ancestors: np.ndarray | None = None
        # per-instance memo for derived tables (IC per measure)
        self.memo: dict = {}

    # construction / serialization ------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str | None]]) -> "Taxonomy":
        parent_of: dict[str, str | None] = {}
        for child, par in edges:
            child = normalize_code(child)
            par = normalize_code(par) if par is not None else None
            if not child:
                raise MalformedLine("empty child code")
            if par == "":
                par = None
            if child == par:
                raise CycleDetected(offenders=[child])
            if child in parent_of and parent_of[child] is not None:
                if par is not None and parent_of[child] != par:
                    raise DuplicateChild(
                        f"{child} has parents {parent_of[child]} and {par}",
                        offenders=[child],
                    )
                continue
            parent_of[child] = par
            if par is not None:
                parent_of.setdefault(par, None)
        if not parent_of:
            raise EmptyDocument("no edges found")
        return cls(parent_of)

    @classmethod
    def from_json(cls, text: str) -> "Taxonomy":
        data = json.loads(text)
        edges = [(c, p) for c, p in data["edges"]]
        edges.append((data["root"], None))
        return cls.from_edges(edges)

    def edges(self) -> list[tuple[str, str]]:
        return [(self._codes[i], self._codes[p]) for i, p in enumerate(self._parent) if p >= 0]

    def to_edge_list(self) -> str:
        lines = [f"{self.root},"]
        lines.extend(f"{c},{p}" for c, p in self.edges())
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"root": self.root, "edges": [list(e) for e in self.edges()]})

    # basic queries ----------------------------------------------------

    @property
    def codes(self) -> tuple[str, ...]:
        return self._codes

    @property
    def depths(self) -> np.ndarray:
        return self._depth

    @property
    def leaf_counts(self) -> np.ndarray:
        return self._leaves

    @property
    def parents(self) -> np.ndarray:
        return self._parent

    def __len__(self) -> int:
        return len(self._codes)

    def __contains__(self, code: object) -> bool:
        return code in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Taxonomy):
            return NotImplemented
        return self._codes == other._codes and np.array_equal(self._parent, other._parent)

    def __hash__(self) -> int:
        return hash((self._codes, self._parent.tobytes()))

    def __repr__(self) -> str:
        return (
            f"Taxonomy(nodes={len(self)}, leaves={self.total_leaves}, "
            f"max_depth={self.max_depth})"
        )

    def index(self, code: str) -> int:
        try:
            return self._index[code]
        except KeyError:
            raise UnknownCode(offenders=[code]) from None

    def indices(self, codes: Sequence[str]) -> np.ndarray:
        """Map codes to node indices, reporting every unknown code at once."""
        missing = [c for c in codes if c not in self._index]
        if missing:
            raise UnknownCode(offenders=sorted(set(missing)))
        return np.fromiter((self._index[c] for c in codes), dtype=np.int64, count=len(codes))

    def parent(self, code: str) -> str | None:
        p = self._parent[self.index(code)]
        return self._codes[p] if p >= 0 else None

    def children(self, code: str) -> list[str]:
        return [self._codes[k] for k in self._children[self.index(code)]]

    def is_leaf(self, code: str) -> bool:
        return not self._children[self.index(code)]

    def leaves(self) -> list[str]:
        return [c for i, c in enumerate(self._codes) if not self._children[i]]

    def depth(self, code: str) -> int:
        return int(self._depth[self.index(code)])

    def leaf_count_under(self, code: str) -> int:
        return int(self._leaves[self.index(code)])

    def subsumer_count(self, code: str) -> int:
        return self.depth(code) + 1

    def ancestors(self, code: str) -> list[str]:
        """Subsumers of ``code`` from the node itself up to the root."""
        i = self.index(code)
        out = []
        while i >= 0:
            out.append(self._codes[i])
            i = self._parent[i]
        return out

    def _lca_index(self, i: int, j: int) -> int:
        di, dj = self._depth[i], self._depth[j]
        while di > dj:
            i = self._parent[i]
            di -= 1
        while dj > di:
            j = self._parent[j]
            dj -= 1
        while i != j:
            i = self._parent[i]
            j = self._parent[j]
        return int(i)

    def lca(self, a: str, b: str) -> str:
        return self._codes[self._lca_index(self.index(a), self.index(b))]

    def shortest_path_len(self, a: str, b: str) -> int:
        i, j = self.index(a), self.index(b)
        l = self._lca_index(i, j)
        return int(self._depth[i] + self._depth[j] - 2 * self._depth[l])

    # vectorized helpers -------------------------------------------------

    def ancestor_table(self) -> np.ndarray:
        """``table[i, k]`` is the ancestor of node ``i`` at depth ``k``, or -1."""
        if self._ancestors is None:
            n = len(self._codes)
            table = np.full((n, self.max_depth + 1), -1, dtype=np.int64)
            for i in range(n):
                p = self._parent[i]
                if p >= 0:
                    table[i] = table[p]
                table[i, self._depth[i]] = i
            table.flags.writeable = False
            self._ancestors = table
        return self._ancestors

    def lca_matrix(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Node index of the LCA for every (row, col) pair of node indices."""
        table = self.ancestor_table()
        a = table[np.asarray(rows, dtype=np.int64)]
        b = table[np.asarray(cols, dtype=np.int64)]
        out = np.empty((len(a), len(b)), dtype=np.int64)
        step = max(1, 4_000_000 // max(1, len(b) * table.shape[1]))
        for s in range(0, len(a), step):
            blk = a[s : s + step]
            same = (blk[:, None, :] == b[None, :, :]) & (blk[:, None, :] >= 0)
            shared = np.logical_and.accumulate(same, axis=2).sum(axis=2) - 1
            out[s : s + step] = np.take_along_axis(blk, shared, axis=1)
        return out


def parse_edge_list(text: str) -> Taxonomy:
    """Parse a ``child,parent`` document into an indexed :class:`Taxonomy`.

    Lines starting with ``#`` and blank lines are ignored; ``root,`` declares
    a root explicitly. Raises ``EmptyDocument``, ``MultipleRoots``,
    ``CycleDetected`` or ``DuplicateChild``.
    """
    if text.startswith("﻿"):
        text = text[1:]
    edges: list[tuple[str, str | None]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        child, sep, par = line.partition(",")
        if not sep:
            raise MalformedLine(f"line {lineno}: expected 'child,parent', got {line!r}")
        if "," in par:
            raise MalformedLine(f"line {lineno}: too many fields in {line!r}")
        child = normalize_code(child)
        if not child:
            raise MalformedLine(f"line {lineno}: empty child code")
        par = normalize_code(par)
        edges.append((child, par or None))
    if not edges:
        raise EmptyDocument("no edges found")
    return Taxonomy.from_edges(edges)


def read_taxonomy(path) -> Taxonomy:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return Taxonomy.from_json(text)
    return parse_edge_list(text)
