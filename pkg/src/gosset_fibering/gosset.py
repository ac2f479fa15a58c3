"""Dual Gosset polytopes of P^3 ... P^8 as combinatorial objects.

Vertices of the Gosset polytope are facets of P^n, simplex facets are its
real vertices and orthoplex facets its ideal vertices.  Adjacency is decided
with exact integer arithmetic for every construction.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from .octonion import ONE, Octonion, gosset240_vertices

SCHEMA = "gosset-fibering/polytope"
CONSTRUCTION_VERSION = 1

# facets, ideal vertices, finite vertices of P^n
FACET_COUNTS: dict[int, tuple[int, int, int]] = {
    3: (6, 3, 2),
    4: (10, 5, 5),
    5: (16, 10, 16),
    6: (27, 27, 72),
    7: (56, 126, 576),
    8: (240, 2160, 17280),
}
DEGREE = {3: 3, 4: 6, 5: 10, 6: 16, 7: 27, 8: 56}
GOSSET_NAME = {3: "triangular prism", 4: "0_21", 5: "1_21", 6: "2_21", 7: "3_21", 8: "4_21"}


class ValidationError(Exception):
    """A construction or input failed a structural check."""


@dataclass
class GossetPolytope:
    n: int
    vertices: list[tuple[int, ...]]
    neighbours: list[int]
    coordinate_scale: int = 1
    simplex_facets: list[tuple[int, ...]] = field(default_factory=list)
    orthoplex_facets: list[tuple[tuple[int, int], ...]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.neighbours[u] >> v & 1)

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        k = self.size
        a = np.zeros((k, k), dtype=np.uint8)
        for u, mask in enumerate(self.neighbours):
            for v in _bits(mask):
                a[u, v] = 1
        return a

    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self.neighbours]

    def octonion(self, i: int) -> Octonion:
        if self.n < 7:
            raise ValueError("only the n=7,8 polytopes live in octonion space")
        return Octonion(self.vertices[i])

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def counts(self) -> tuple[int, int, int]:
        return (self.size, len(self.orthoplex_facets), len(self.simplex_facets))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _from_rule(vertices: Sequence[tuple[int, ...]], rule) -> list[int]:
    nb = [0] * len(vertices)
    for i, j in itertools.combinations(range(len(vertices)), 2):
        if rule(vertices[i], vertices[j]):
            nb[i] |= 1 << j
            nb[j] |= 1 << i
    return nb


def _hamming(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(1 for a, b in zip(u, v) if a != b)


def lorentzian(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u[:-1], v[:-1])) - u[-1] * v[-1]


def _prism() -> tuple[list[tuple[int, ...]], list[int]]:
    # triangle vertices of the standard 2-simplex times {0, 1}
    verts = [tuple(1 if k == i else 0 for k in range(3)) + (h,) for h in (0, 1) for i in range(3)]
    nb = _from_rule(verts, lambda u, v: (u[3] == v[3]) != (u[:3] == v[:3]))
    return verts, nb


def _rectified_simplex() -> tuple[list[tuple[int, ...]], list[int]]:
    verts = sorted(set(itertools.permutations((0, 0, 0, 1, 1))), reverse=True)
    return verts, _from_rule(verts, lambda u, v: _hamming(u, v) == 2)


def _demicube() -> tuple[list[tuple[int, ...]], list[int]]:
    verts = [s for s in itertools.product((1, -1), repeat=5) if s.count(-1) % 2 == 1]
    return verts, _from_rule(verts, lambda u, v: _hamming(u, v) == 2)


def _schlafli_vertices() -> list[tuple[int, ...]]:
    verts = []
    for i in range(6):
        verts.append(tuple(-1 if k == i else 0 for k in range(6)) + (0,))
    for i, j in itertools.combinations(range(6), 2):
        verts.append(tuple(1 if k in (i, j) else 0 for k in range(6)) + (1,))
    for i in range(6):
        verts.append(tuple(0 if k == i else 1 for k in range(6)) + (2,))
    return verts


def _schlafli() -> tuple[list[tuple[int, ...]], list[int]]:
    verts = _schlafli_vertices()
    for v in verts:
        assert sum(v[:6]) - 3 * v[6] == -1
    return verts, _from_rule(verts, lambda u, v: lorentzian(u, v) == 0)


def _octonion_graph(octs: Sequence[Octonion]) -> tuple[list[tuple[int, ...]], list[int]]:
    verts = [o.doubled for o in octs]
    # scalar product 1/2 is doubled-dot 2
    return verts, _from_rule(verts, lambda u, v: sum(a * b for a, b in zip(u, v)) == 2)


def vertex_figure_of_one() -> list[Octonion]:
    """The 56 neighbours of 1 in 4_21, in the 240-vertex order."""
    return [o for o in gosset240_vertices() if o.doubled_dot(ONE) == 2]


def build(n: int) -> GossetPolytope:
    """Construct the Gosset polytope dual to P^n together with its facets."""
    if n not in FACET_COUNTS:
        raise ValueError(f"n must be in 3..8, got {n}")
    scale = 1
    if n == 3:
        verts, nb = _prism()
    elif n == 4:
        verts, nb = _rectified_simplex()
    elif n == 5:
        verts, nb = _demicube()
    elif n == 6:
        verts, nb = _schlafli()
    elif n == 7:
        verts, nb = _octonion_graph(vertex_figure_of_one())
        scale = 2
    else:
        verts, nb = _octonion_graph(gosset240_vertices())
        scale = 2
    q = GossetPolytope(n, list(verts), nb, scale)
    q.simplex_facets = enumerate_simplex_facets(q)
    q.orthoplex_facets = enumerate_orthoplex_facets(q)
    return q


def iter_cliques(neighbours: Sequence[int], mask: int, max_size: int):
    """Yield every non-empty clique inside `mask` as a sorted tuple, in lexicographic order."""

    def extend(clique: tuple[int, ...], cand: int):
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            c2 = clique + (v,)
            yield c2
            if len(c2) < max_size:
                yield from extend(c2, cand & neighbours[v])

    return extend((), mask)


def enumerate_simplex_facets(q: GossetPolytope) -> list[tuple[int, ...]]:
    """All n-cliques; refuses a graph having any clique of size n+1."""
    n = q.n
    out = []
    for c in iter_cliques(q.neighbours, (1 << q.size) - 1, n + 1):
        if len(c) == n + 1:
            raise ValidationError(f"clique of size {n + 1} found: {c}")
        if len(c) == n:
            out.append(c)
    out.sort()
    return out


def _opposite_pairs(q: GossetPolytope, members: Sequence[int]) -> tuple[tuple[int, int], ...]:
    members = sorted(members)
    want = 2 * (q.n - 1)
    if len(members) != want:
        raise ValidationError(f"orthoplex candidate has {len(members)} vertices, expected {want}")
    pairs = []
    for u, v in itertools.combinations(members, 2):
        if not q.adjacent(u, v):
            pairs.append((u, v))
    covered = sorted(x for p in pairs for x in p)
    if covered != members:
        raise ValidationError(f"candidate {members} is not a cocktail-party graph")
    return tuple(pairs)


def enumerate_orthoplex_facets(q: GossetPolytope) -> list[tuple[tuple[int, int], ...]]:
    """Orthoplex facets, each as its list of n-1 opposite (non-adjacent) pairs."""
    n = q.n
    groups: list[list[int]]
    if n == 3:
        groups = [[i, (i + 1) % 3, i + 3, (i + 1) % 3 + 3] for i in range(3)]
    elif n in (4, 5):
        target = (0,) if n == 4 else (1, -1)
        groups = [
            [i for i, v in enumerate(q.vertices) if v[k] == t]
            for k in range(len(q.vertices[0]))
            for t in target
        ]
    elif n == 6:
        full = (1 << q.size) - 1
        groups = [_bits(full & ~q.neighbours[v] & ~(1 << v)) for v in range(q.size)]
    else:
        groups = _zero_pair_groups(q)
    facets = {_opposite_pairs(q, g) for g in groups}
    return sorted(facets)


def _zero_pair_groups(q: GossetPolytope) -> list[list[int]]:
    verts = q.vertices
    seen: dict[tuple[int, ...], int] = {}
    npairs = 0
    for u, w in itertools.combinations(range(q.size), 2):
        if sum(a * b for a, b in zip(verts[u], verts[w])) != 0:
            continue
        npairs += 1
        group = tuple(sorted({u, w} | set(_bits(q.neighbours[u] & q.neighbours[w]))))
        seen[group] = seen.get(group, 0) + 1
    per_facet = q.n - 1
    if any(c != per_facet for c in seen.values()) or npairs != per_facet * len(seen):
        raise ValidationError("zero-product pairs are not evenly partitioned among facets")
    return [list(g) for g in seen]


def clique_counts(q: GossetPolytope) -> list[int]:
    """Number of cliques of each size 1..n in the 1-skeleton."""
    counts = [0] * (q.n + 1)
    for c in iter_cliques(q.neighbours, (1 << q.size) - 1, q.n):
        counts[len(c)] += 1
    return counts[1:]


def face_vector(q: GossetPolytope) -> list[int]:
    """f_0 .. f_n of P^n: f_i counts the (n-1-i)-simplices of the nerve."""
    by_size = clique_counts(q)  # by_size[k] = number of (k+1)-cliques
    n = q.n
    return [by_size[n - 1 - i] for i in range(n)] + [1]


def euler_characteristic(q: GossetPolytope) -> Fraction:
    """Orbifold Euler characteristic sum (-1)^i f_i / 2^(n-i) of P^n."""
    f = face_vector(q)
    n = q.n
    return sum((Fraction((-1) ** i * f[i], 2 ** (n - i)) for i in range(n + 1)), Fraction(0))


def validate(q: GossetPolytope) -> None:
    """Check facet counts, regularity and facet structure; raise on failure."""
    expected = FACET_COUNTS[q.n]
    if q.counts() != expected:
        raise ValidationError(f"P^{q.n}: counts {q.counts()} differ from {expected}")
    if set(q.degrees()) != {DEGREE[q.n]}:
        raise ValidationError(f"P^{q.n}: degrees {sorted(set(q.degrees()))}, expected {DEGREE[q.n]}")
    for f in q.simplex_facets:
        for u, v in itertools.combinations(f, 2):
            if not q.adjacent(u, v):
                raise ValidationError(f"simplex facet {f} is not a clique")
    for facet in q.orthoplex_facets:
        members = [x for p in facet for x in p]
        if len(set(members)) != 2 * (q.n - 1):
            raise ValidationError(f"orthoplex facet {facet} has repeated vertices")
        opposite = {frozenset(p) for p in facet}
        for u, v in itertools.combinations(members, 2):
            if q.adjacent(u, v) == (frozenset((u, v)) in opposite):
                raise ValidationError(f"orthoplex facet {facet} is not K_(n-1)x2")


def to_json(q: GossetPolytope) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "version": CONSTRUCTION_VERSION,
        "n": q.n,
        "dual": GOSSET_NAME[q.n],
        "coordinate_scale": q.coordinate_scale,
        "vertices": [list(v) for v in q.vertices],
        "adjacency": [_bits(m) for m in q.neighbours],
        "simplex_facets": [list(f) for f in q.simplex_facets],
        "orthoplex_facets": [[list(p) for p in f] for f in q.orthoplex_facets],
    }


def from_json(doc: dict[str, Any], check: bool = True) -> GossetPolytope:
    if doc.get("schema") != SCHEMA or doc.get("version") != CONSTRUCTION_VERSION:
        raise ValidationError(f"unsupported polytope document {doc.get('schema')!r} v{doc.get('version')!r}")
    nb = [sum(1 << v for v in row) for row in doc["adjacency"]]
    q = GossetPolytope(
        doc["n"],
        [tuple(v) for v in doc["vertices"]],
        nb,
        doc["coordinate_scale"],
        [tuple(f) for f in doc["simplex_facets"]],
        [tuple(tuple(p) for p in f) for f in doc["orthoplex_facets"]],
    )
    if check:
        validate(q)
    return q


def dumps(q: GossetPolytope) -> str:
    return json.dumps(to_json(q), separators=(",", ":"))
