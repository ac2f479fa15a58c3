"""Flag complexes given by their 1-skeleton, and their full subcomplexes.

Graphs are stored as one integer bitmask of neighbours per vertex; a simplex
is any clique.  Rational Betti numbers come from boundary ranks over a large
prime field, re-checked over a second prime.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _rank

log = logging.getLogger(__name__)


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class FlagComplex:
    """The clique complex of a simple graph."""

    def __init__(self, neighbours: Sequence[int]):
        self.neighbours = tuple(neighbours)
        for v, m in enumerate(self.neighbours):
            if m >> v & 1:
                raise ValueError(f"vertex {v} is adjacent to itself")
            for u in bits(m):
                if not self.neighbours[u] >> v & 1:
                    raise ValueError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "FlagComplex":
        nb = [0] * n
        for u, v in edges:
            nb[u] |= 1 << v
            nb[v] |= 1 << u
        return cls(nb)

    @property
    def vertex_count(self) -> int:
        return len(self.neighbours)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, m in enumerate(self.neighbours) for v in bits(m) if u < v]

    def full(self) -> "InducedSubcomplex":
        return InducedSubcomplex(self, (1 << self.vertex_count) - 1)

    def induced(self, vertices: Iterable[int] | int) -> "InducedSubcomplex":
        mask = vertices if isinstance(vertices, int) else mask_of(vertices)
        if mask >> self.vertex_count:
            raise ValueError("selection contains vertices outside the complex")
        return InducedSubcomplex(self, mask)


@dataclass(frozen=True)
class InducedSubcomplex:
    """Full subcomplex of `parent` spanned by the vertices in `mask`."""

    parent: FlagComplex = field(repr=False)
    mask: int

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @cached_property
    def local_neighbours(self) -> list[int]:
        """Neighbour bitmasks re-indexed by position in `vertices`."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for v in self.vertices:
            out.append(mask_of(pos[u] for u in bits(self.parent.neighbours[v] & self.mask)))
        return out

    def adjacency_matrix(self) -> np.ndarray:
        k = self.size
        a = np.zeros((k, k), dtype=np.uint8)
        for i, m in enumerate(self.local_neighbours):
            a[i, bits(m)] = 1
        return a

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.local_neighbours) // 2

    def complement(self) -> "InducedSubcomplex":
        return InducedSubcomplex(self.parent, ((1 << self.parent.vertex_count) - 1) & ~self.mask)


def _local_cliques(neighbours: Sequence[int], size: int, max_size: int) -> list[list[tuple[int, ...]]]:
    out: list[list[tuple[int, ...]]] = [[] for _ in range(max_size + 1)]

    def extend(clique: tuple[int, ...], cand: int) -> None:
        k = len(clique) + 1
        bucket = out[k]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            c2 = clique + (v,)
            bucket.append(c2)
            if k < max_size:
                rest = cand & neighbours[v]
                if rest:
                    extend(c2, rest)

    extend((), (1 << size) - 1)
    return out


def local_simplices(sub: InducedSubcomplex, max_dim: int | None = None) -> list[np.ndarray]:
    """Simplices by dimension, in local vertex indices, rows lexicographically sorted.

    Trailing empty dimensions are dropped; an empty complex gives [].
    """
    max_size = sub.size if max_dim is None else min(max_dim + 1, sub.size)
    if max_size == 0:
        return []
    by_size = _local_cliques(sub.local_neighbours, sub.size, max_size)
    arrays = []
    for k in range(1, max_size + 1):
        rows = by_size[k]
        if not rows:
            break
        arrays.append(np.array(rows, dtype=np.int64).reshape(len(rows), k))
    return arrays


@dataclass(frozen=True)
class CliqueTable:
    counts: tuple[int, ...]
    simplices: tuple[np.ndarray, ...] = field(repr=False)

    def __getitem__(self, dim: int) -> np.ndarray:
        return self.simplices[dim]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.counts))


def cliques_by_dimension(sub: InducedSubcomplex | FlagComplex, max_dim: int) -> CliqueTable:
    """All simplices of dimension <= max_dim, as rows of parent vertex indices."""
    if max_dim < 0:
        raise ValueError("max_dim must be non-negative")
    if isinstance(sub, FlagComplex):
        sub = sub.full()
    local = local_simplices(sub, max_dim)
    verts = np.array(sub.vertices, dtype=np.int64)
    arrays = [verts[a] for a in local]
    while len(arrays) < max_dim + 1:
        arrays.append(np.zeros((0, len(arrays) + 1), dtype=np.int64))
    return CliqueTable(tuple(len(a) for a in arrays), tuple(arrays))


def euler_characteristic(sub: InducedSubcomplex) -> int:
    """Unreduced Euler characteristic (0 for the empty complex)."""
    return sum((-1) ** d * len(a) for d, a in enumerate(local_simplices(sub)))


@dataclass(frozen=True)
class BettiVector:
    """Rational Betti numbers b_0..b_d; `minus_one` is the reduced b_{-1}."""

    values: tuple[int, ...]
    reduced: bool = True
    minus_one: int = 0

    def __getitem__(self, degree: int) -> int:
        if degree == -1:
            return self.minus_one
        if 0 <= degree < len(self.values):
            return self.values[degree]
        return 0

    def euler_characteristic(self) -> int:
        """Alternating sum; in the reduced convention this is chi - 1."""
        total = sum((-1) ** k * b for k, b in enumerate(self.values))
        return total - self.minus_one if self.reduced else total

    def as_list(self) -> list[int]:
        return list(self.values)


class RankMismatch(RuntimeWarning):
    pass


def _ranks(simplices: list[np.ndarray], primes: Sequence[int]) -> list[int]:
    first = _rank.chain_ranks(simplices, primes[0])
    for p in primes[1:]:
        other = _rank.chain_ranks(simplices, p)
        if other != first:
            log.warning("ranks differ between primes (%s vs %s); computing exactly", first, other)
            return _rank.exact_chain_ranks(simplices)
    return first


def betti_numbers(
    sub: InducedSubcomplex | FlagComplex,
    reduced: bool = True,
    primes: Sequence[int] = _rank.PRIMES,
) -> BettiVector:
    """Rational Betti numbers of a flag complex via boundary ranks."""
    if isinstance(sub, FlagComplex):
        sub = sub.full()
    simplices = local_simplices(sub)
    if not simplices:
        return BettiVector((), reduced, 1 if reduced else 0)
    ranks = _ranks(simplices, primes) + [0]
    values = [len(s) - ranks[d] - ranks[d + 1] for d, s in enumerate(simplices)]
    if not reduced:
        values[0] += 1
    return BettiVector(tuple(values), reduced, 0)


def is_connected(sub: InducedSubcomplex) -> bool:
    """True iff the selection is non-empty and its induced graph is connected."""
    if sub.mask == 0:
        return False
    nb = sub.parent.neighbours
    start = sub.mask & -sub.mask
    seen = start
    frontier = start
    while frontier:
        grow = 0
        for v in bits(frontier):
            grow |= nb[v]
        frontier = grow & sub.mask & ~seen
        seen |= frontier
    return seen == sub.mask


def components(sub: InducedSubcomplex) -> list[int]:
    """Vertex masks of the connected components."""
    rest = sub.mask
    nb = sub.parent.neighbours
    out = []
    while rest:
        seen = frontier = rest & -rest
        while frontier:
            grow = 0
            for v in bits(frontier):
                grow |= nb[v]
            frontier = grow & rest & ~seen
            seen |= frontier
        out.append(seen)
        rest &= ~seen
    return out
