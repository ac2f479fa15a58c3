"""Canonical labelling of small graphs by refinement and individualisation.

Colour refinement (1-dimensional Weisfeiler-Leman) is run to a stable
partition; the first non-singleton cell is then split by individualising
each of its vertices in turn, skipping vertices already known to be in the
same orbit under the automorphisms found so far.  The certificate is the
lexicographically least adjacency matrix among all leaves.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complex import InducedSubcomplex


@dataclass(frozen=True)
class Certificate:
    """Isomorphism invariant of a vertex-coloured graph; equal iff isomorphic."""

    size: int
    colours: bytes
    packed: bytes

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.size.to_bytes(4, "little"))
        h.update(self.colours)
        h.update(self.packed)
        return h.hexdigest()[:24]

    def _key(self) -> tuple[int, bytes, bytes]:
        return (self.size, self.colours, self.packed)

    def __lt__(self, other: "Certificate") -> bool:
        return self._key() < other._key()


def _normalise(labels: np.ndarray) -> np.ndarray:
    return np.unique(labels, return_inverse=True)[1].astype(np.int64)


def refine(adj: np.ndarray, colours: np.ndarray) -> np.ndarray:
    """Coarsest equitable refinement; new cell indices depend only on isomorphism-invariant data."""
    n = len(colours)
    colours = _normalise(colours)
    k = int(colours.max()) + 1 if n else 0
    while True:
        onehot = np.zeros((n, k))
        onehot[np.arange(n), colours] = 1.0
        counts = (adj @ onehot).astype(np.int64)
        key = np.column_stack([colours, counts])
        _, new = np.unique(key, axis=0, return_inverse=True)
        new = new.reshape(-1).astype(np.int64)
        k2 = int(new.max()) + 1
        if k2 == k:
            return new
        colours, k = new, k2


def _orbit_labels(n: int, generators: Sequence[np.ndarray]) -> np.ndarray:
    parent = np.arange(n)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for x in np.flatnonzero(g != np.arange(n)):
            a, b = find(int(x)), find(int(g[x]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    return np.array([find(x) for x in range(n)])


class _Search:
    def __init__(self, adj: np.ndarray, colours: np.ndarray, max_leaves: int):
        self.adj = adj.astype(np.float64)
        self.adj_bool = adj.astype(bool)
        self.base = colours
        self.n = len(colours)
        self.best: tuple[bytes, bytes] | None = None
        self.best_order: np.ndarray | None = None
        self.seen: dict[tuple[bytes, bytes], np.ndarray] = {}
        self.automorphisms: list[np.ndarray] = []
        self.leaves = 0
        self.max_leaves = max_leaves
        iu = np.triu_indices(self.n, 1)
        self._iu = iu

    def run(self) -> None:
        if self.n:
            self._visit(refine(self.adj, self.base), ())

    def _leaf(self, colours: np.ndarray) -> None:
        self.leaves += 1
        if self.leaves > self.max_leaves:
            raise RuntimeError("canonical labelling exceeded its leaf budget")
        order = np.argsort(colours)
        b = self.adj_bool[np.ix_(order, order)]
        key = (self.base[order].astype(np.int64).tobytes(), np.packbits(b[self._iu]).tobytes())
        prev = self.seen.get(key)
        if prev is not None:
            g = np.empty(self.n, dtype=np.int64)
            g[order] = prev
            self.automorphisms.append(g)
            return
        self.seen[key] = order
        if self.best is None or key < self.best:
            self.best, self.best_order = key, order

    def _visit(self, colours: np.ndarray, prefix: tuple[int, ...]) -> None:
        counts = np.bincount(colours)
        if len(counts) == self.n:
            self._leaf(colours)
            return
        target = int(np.flatnonzero(counts > 1)[0])
        cell = np.flatnonzero(colours == target)
        done: list[int] = []
        for w in cell:
            w = int(w)
            if done:
                gens = [g for g in self.automorphisms if all(g[p] == p for p in prefix)]
                if gens:
                    orbit = _orbit_labels(self.n, gens)
                    if any(orbit[w] == orbit[d] for d in done):
                        continue
            done.append(w)
            child = colours * 2
            child[w] += 1
            self._visit(refine(self.adj, child), prefix + (w,))


def canonical_labelling(
    adj: np.ndarray, colours: Sequence[int] | None = None, max_leaves: int = 1_000_000
) -> tuple[np.ndarray, Certificate, list[np.ndarray]]:
    """Return (canonical vertex order, certificate, automorphisms found).

    `colours` is an optional vertex colouring that isomorphisms must respect.
    """
    n = adj.shape[0]
    base = np.zeros(n, dtype=np.int64) if colours is None else np.asarray(colours, dtype=np.int64)
    search = _Search(np.asarray(adj), base, max_leaves)
    search.run()
    if n == 0:
        return np.zeros(0, dtype=np.int64), Certificate(0, b"", b""), []
    assert search.best is not None and search.best_order is not None
    cols, packed = search.best
    return search.best_order, Certificate(n, cols, packed), search.automorphisms


def canonical_form(sub: InducedSubcomplex) -> Certificate:
    """Certificate of the 1-skeleton, which determines the flag complex."""
    return canonical_labelling(sub.adjacency_matrix())[1]


def automorphism_generators(adj: np.ndarray, colours: Sequence[int] | None = None) -> list[np.ndarray]:
    """Colour-preserving automorphisms found by the canonical search, each re-verified."""
    _, _, autos = canonical_labelling(adj, colours)
    a = np.asarray(adj, dtype=bool)
    base = None if colours is None else np.asarray(colours)
    out = []
    for g in autos:
        if not np.array_equal(a[np.ix_(g, g)], a):
            raise AssertionError("search produced a non-automorphism")
        if base is not None and not np.array_equal(base[g], base):
            raise AssertionError("search produced a colour-changing map")
        out.append(g)
    return out
