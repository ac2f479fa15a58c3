"""Colourings of P^n and invariants of the manifolds M^n they define.

A colouring assigns a colour to each vertex of the Gosset polytope (a facet
of P^n) so that adjacent vertices differ.  The manifold M^n is tiled by 2^c
copies of P^n, and its Betti numbers are sums of reduced Betti numbers of the
full subcomplexes K_w spanned by the colour classes in each subset w.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Sequence

import mpmath
import numpy as np

from . import gosset
from .complex import BettiVector, FlagComplex, betti_numbers, bits
from .gosset import GossetPolytope, ValidationError
from .octonion import fano_line, hextet_index
from .parallel import chunked, run_chunks

log = logging.getLogger(__name__)

COLOURING_SCHEMA = "gosset-fibering/colouring"
REPORT_SCHEMA = "gosset-fibering/manifold"
SCHEMA_VERSION = 1

CLASS_TYPE = {3: "3 pairs", 4: "5 pairs", 5: "8 pairs", 6: "9 triplets", 7: "14 quartets", 8: "15 hextets"}

# known b_0 .. b_n of M^n and cusp totals; used to select the P^3, P^4 and P^5 colourings
REFERENCE_BETTI = {
    3: (1, 3, 2, 0),
    4: (1, 5, 10, 4, 0),
    5: (1, 24, 120, 136, 39, 0),
    6: (1, 18, 183, 411, 207, 26, 0),
    7: (1, 182, 6321, 41300, 55139, 24010, 4031, 0),
    8: (1, 365, 33670, 583290, 1783226, 1346030, 456595, 65279, 0),
}
REFERENCE_CUSPS = {3: 3, 4: 5, 5: 40, 6: 27, 7: 4032, 8: 65280}


@dataclass(frozen=True)
class Colouring:
    """Colour (0-based) of every vertex; JSON files use colours 1..c."""

    colours: tuple[int, ...]

    @property
    def c(self) -> int:
        return max(self.colours) + 1 if self.colours else 0

    def classes(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.c)]
        for v, k in enumerate(self.colours):
            out[k].append(v)
        return [tuple(x) for x in out]

    def class_masks(self) -> list[int]:
        masks = [0] * self.c
        for v, k in enumerate(self.colours):
            masks[k] |= 1 << v
        return masks

    def subset_mask(self, omega: int) -> int:
        """Vertices whose colour lies in the subset `omega` (a bitmask over colours)."""
        m = 0
        for k, cm in enumerate(self.class_masks()):
            if omega >> k & 1:
                m |= cm
        return m

    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes()]

    def validate(self, q: GossetPolytope) -> None:
        if len(self.colours) != q.size:
            raise ValidationError(f"colouring has {len(self.colours)} entries, polytope has {q.size} facets")
        if min(self.colours, default=0) < 0:
            raise ValidationError("negative colour index")
        for u, m in enumerate(q.neighbours):
            for v in bits(m):
                if u < v and self.colours[u] == self.colours[v]:
                    raise ValidationError(f"adjacent facets {u} and {v} share colour {self.colours[u] + 1}")
        missing = sorted(set(range(self.c)) - set(self.colours))
        if missing:
            raise ValidationError(f"colours {[k + 1 for k in missing]} are not used")

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": COLOURING_SCHEMA,
            "version": SCHEMA_VERSION,
            "colours": {str(v): k + 1 for v, k in enumerate(self.colours)},
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "Colouring":
        table = doc["colours"] if "colours" in doc else doc
        try:
            pairs = sorted((int(v), int(k)) for v, k in table.items())
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"malformed colouring entry: {exc}") from exc
        if [v for v, _ in pairs] != list(range(len(pairs))):
            raise ValidationError("colouring must list every vertex index 0..N-1 exactly once")
        if any(k < 1 for _, k in pairs):
            raise ValidationError("colours are numbered from 1")
        return cls(tuple(k - 1 for _, k in pairs))

    @classmethod
    def from_classes(cls, classes: Sequence[Sequence[int]], size: int) -> "Colouring":
        cols = [-1] * size
        for k, members in enumerate(classes):
            for v in members:
                if cols[v] != -1:
                    raise ValidationError(f"vertex {v} listed in two colour classes")
                cols[v] = k
        if -1 in cols:
            raise ValidationError(f"vertex {cols.index(-1)} has no colour")
        return cls(tuple(cols))


def load_colouring(path: str) -> Colouring:
    with open(path) as fh:
        return Colouring.from_json(json.load(fh))


def _perfect_matchings(allowed: list[int], free: int) -> Iterator[list[tuple[int, int]]]:
    if not free:
        yield []
        return
    u = (free & -free).bit_length() - 1
    rest = free & ~(1 << u)
    for v in bits(allowed[u] & rest):
        for tail in _perfect_matchings(allowed, rest & ~(1 << v)):
            yield [(u, v)] + tail


def enumerate_pair_colourings(q: GossetPolytope) -> list[Colouring]:
    """All colourings by pairs: the perfect matchings of the non-adjacency graph, in lexicographic order."""
    full = (1 << q.size) - 1
    non_adj = [full & ~m & ~(1 << u) for u, m in enumerate(q.neighbours)]
    return [Colouring.from_classes(pairs, q.size) for pairs in _perfect_matchings(non_adj, full)]


def listed_triplets(q: GossetPolytope) -> list[list[int]]:
    """The nine triplets of the 2_21 colouring, each in its listed vertex order."""
    base = [(-1, 0, 0, 0, 0, 0, 0), (1, 1, 0, 0, 0, 0, 1), (1, 0, 1, 1, 1, 1, 2)]
    extra = [
        [(1, 0, 1, 0, 0, 0, 1), (0, 1, 0, 0, 1, 0, 1), (0, 0, 0, 1, 0, 1, 1)],
        [(0, 1, 0, 1, 0, 0, 1), (0, 0, 1, 0, 0, 1, 1), (1, 0, 0, 0, 1, 0, 1)],
        [(0, 0, 1, 0, 1, 0, 1), (1, 0, 0, 1, 0, 0, 1), (0, 1, 0, 0, 0, 1, 1)],
    ]
    classes = []
    for k in range(6):
        # cyclic shift of the first six coordinates by k places
        classes.append([v[6 - k : 6] + v[: 6 - k] + v[6:] for v in base])
    classes += extra
    return [[q.index[v] for v in cls] for cls in classes]


def _quartet_colour(q: GossetPolytope, i: int) -> int:
    o = q.octonion(i)
    for n in range(1, 8):
        line = fano_line(n)
        if set(o.support) == {0, *line}:
            minus = sum(1 for j in line if o.doubled[j] < 0) % 2
            return 2 * (n - 1) + minus
    raise ValidationError(f"{o} is not a vertex of 3_21")


def _fits_reference(q: GossetPolytope, col: Colouring) -> bool:
    if cusp_census(q, col).total != REFERENCE_CUSPS[q.n]:
        return False
    return betti_of_manifold(q, col).values == REFERENCE_BETTI[q.n]


def builtin_colouring(q: GossetPolytope) -> Colouring:
    """The built-in colouring of P^n with the class structure pairs/triplets/quartets/hextets."""
    n = q.n
    if n in (3, 4, 5):
        for col in enumerate_pair_colourings(q):
            if _fits_reference(q, col):
                return col
        raise ValidationError(f"no colouring by pairs of P^{n} reproduces the reference invariants")
    if n == 6:
        col = Colouring.from_classes(listed_triplets(q), q.size)
    elif n == 7:
        col = Colouring(tuple(_quartet_colour(q, i) for i in range(q.size)))
    else:
        col = Colouring(tuple(hextet_index(q.octonion(i)) for i in range(q.size)))
    col.validate(q)
    return col


_KERNEL: FlagComplex | None = None
_MASKS: list[int] = []


def _init_kernel(neighbours: Sequence[int], masks: Sequence[int]) -> None:
    global _KERNEL, _MASKS
    _KERNEL = FlagComplex(neighbours)
    _MASKS = list(masks)


def _subset_betti(batch: Sequence[tuple[int, int]]) -> list[tuple[int, BettiVector]]:
    assert _KERNEL is not None
    out = []
    for omega, weight in batch:
        mask = 0
        for k, cm in enumerate(_MASKS):
            if omega >> k & 1:
                mask |= cm
        out.append((weight, betti_numbers(_KERNEL.induced(mask))))
    return out


def betti_of_manifold(
    q: GossetPolytope,
    col: Colouring,
    symmetry: Sequence[Sequence[int]] | None = None,
    workers: int = 1,
) -> BettiVector:
    """b_k(M) = sum over colour subsets w of the reduced b_{k-1}(K_w).

    `symmetry` lists colour permutations induced by verified automorphisms;
    when given, one subset per orbit is computed and weighted by orbit size.
    """
    c = col.c
    if symmetry:
        from .symmetry import subset_orbits

        terms = subset_orbits(c, symmetry)
    else:
        terms = [(w, 1) for w in range(1 << c)]
    log.info("P^%d: %d subcomplexes to compute", q.n, len(terms))
    results = run_chunks(
        _subset_betti,
        chunked(terms, 64),
        workers,
        _init_kernel,
        (tuple(q.neighbours), tuple(col.class_masks())),
    )
    b = [0] * (q.n + 1)
    for batch in results:
        for weight, bv in batch:
            for k in range(q.n + 1):
                b[k] += weight * bv[k - 1]
    return BettiVector(tuple(b), reduced=False)


def euler_characteristics(q: GossetPolytope, c: int) -> tuple[Fraction, int]:
    """(chi(P), chi(M)) with chi(M) = 2^c chi(P)."""
    chi_p = gosset.euler_characteristic(q)
    chi_m = chi_p * 2**c
    if chi_m.denominator != 1:
        raise ValidationError(f"2^{c} * chi(P) = {chi_m} is not an integer")
    return chi_p, int(chi_m)


@dataclass(frozen=True)
class CuspEntry:
    facet: int
    pairs: tuple[tuple[int, int], ...]
    pair_colours: tuple[tuple[int, int], ...]
    distinct_colours: int
    cusps: int
    multipliers: tuple[int, ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "ideal_vertex": self.facet,
            "pairs": [list(p) for p in self.pairs],
            "pair_colours": [[a + 1, b + 1] for a, b in self.pair_colours],
            "c_prime": self.distinct_colours,
            "cusps": self.cusps,
            "multipliers": list(self.multipliers),
        }


@dataclass(frozen=True)
class CuspCensus:
    entries: tuple[CuspEntry, ...]

    @property
    def total(self) -> int:
        return sum(e.cusps for e in self.entries)

    def breakdown(self) -> list[tuple[int, int, int]]:
        """(c', number of ideal vertices, cusps above each), by increasing c'."""
        tally = Counter((e.distinct_colours, e.cusps) for e in self.entries)
        return sorted((cp, count, cusps) for (cp, cusps), count in tally.items())

    def to_json(self) -> dict[str, Any]:
        return {
            "total": self.total,
            "breakdown": [{"c_prime": cp, "ideal_vertices": k, "cusps_each": m} for cp, k, m in self.breakdown()],
        }


def cusp_census(q: GossetPolytope, col: Colouring) -> CuspCensus:
    """Per ideal vertex: colours on the cube link, 2^(c-c') cusps and circle-length multipliers."""
    c = col.c
    entries = []
    for i, facet in enumerate(q.orthoplex_facets):
        pc = tuple((col.colours[u], col.colours[v]) for u, v in facet)
        distinct = len({k for p in pc for k in p})
        mult = tuple(2 if a == b else 4 for a, b in pc)
        entries.append(CuspEntry(i, facet, pc, distinct, 2 ** (c - distinct), mult))
    return CuspCensus(tuple(entries))


def _max_clique(neighbours: list[int], target: int | None = None) -> list[int]:
    """Branch and bound with greedy-colouring bounds on bitset adjacency."""
    n = len(neighbours)
    best: list[int] = []

    def colour_order(cand: int) -> list[tuple[int, int]]:
        order = []
        colour = 0
        rest = cand
        while rest:
            colour += 1
            q = rest
            while q:
                v = (q & -q).bit_length() - 1
                q &= ~(1 << v) & ~neighbours[v]
                rest &= ~(1 << v)
                order.append((v, colour))
        return order

    def expand(clique: list[int], cand: int) -> bool:
        nonlocal best
        for v, bound in reversed(colour_order(cand)):
            if len(clique) + bound <= len(best):
                return False
            clique.append(v)
            sub = cand & neighbours[v]
            if sub:
                if expand(clique, sub):
                    return True
            elif len(clique) > len(best):
                best = list(clique)
                if target is not None and len(best) >= target:
                    return True
            clique.pop()
            cand &= ~(1 << v)
        return False

    expand([], (1 << n) - 1)
    return sorted(best)


def hoffman_bound(q: GossetPolytope) -> int | None:
    """Ratio bound N*(-l)/(k-l) for the independence number, when the eigenvalues are integers.

    The eigenvalues are found numerically, rounded, and then certified by
    checking exactly that the adjacency matrix is annihilated by the product
    of (A - x I) over the candidate eigenvalues.
    """
    a = q.adjacency_matrix.astype(np.int64)
    ev = np.linalg.eigvalsh(a.astype(float))
    cands = sorted({int(round(x)) for x in ev})
    if any(abs(x - round(x)) > 1e-6 for x in ev):
        return None
    m = np.eye(q.size, dtype=object)
    ao = a.astype(object)
    for x in cands:
        m = m.dot(ao - x * np.eye(q.size, dtype=object))
    if any(v != 0 for v in m.flat):
        return None
    k, low = max(cands), min(cands)
    return (q.size * -low) // (k - low)


def max_disjoint_facets(q: GossetPolytope) -> int:
    """Independence number of the 1-skeleton (most facets that pairwise do not meet)."""
    full = (1 << q.size) - 1
    complement = [full & ~m & ~(1 << u) for u, m in enumerate(q.neighbours)]
    bound = hoffman_bound(q) if q.size > 100 else None
    return len(_max_clique(complement, bound))


def colouring_is_minimal(q: GossetPolytope, c: int, alpha: int | None = None) -> bool:
    """Every colour class is independent, so c >= facets / alpha; minimal if equality is forced."""
    alpha = max_disjoint_facets(q) if alpha is None else alpha
    return c == -(-q.size // alpha)


@dataclass(frozen=True)
class Volume:
    n: int
    polytope: mpmath.mpf
    manifold: mpmath.mpf
    label: str

    def to_json(self, digits: int = 15) -> dict[str, Any]:
        return {
            "n": self.n,
            "polytope": mpmath.nstr(self.polytope, digits),
            "manifold": mpmath.nstr(self.manifold, digits),
            "closed_form": self.label,
        }


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def dirichlet_beta(s: int) -> mpmath.mpf:
    """L-series of the non-trivial character mod 4."""
    return mpmath.nsum(lambda k: (-1) ** k / (2 * k + 1) ** s, [0, mpmath.inf])


_ODD_VOLUMES = {
    3: (Fraction(1), "L(2)", lambda: dirichlet_beta(2)),
    5: (Fraction(7, 8), "zeta(3)", lambda: mpmath.zeta(3)),
    7: (Fraction(8), "L(4)", lambda: dirichlet_beta(4)),
}

COLOUR_COUNT = {3: 3, 4: 5, 5: 8, 6: 9, 7: 14, 8: 15}


def _coefficient_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def volume(n: int, chi_p: Fraction | None = None, c: int | None = None, dps: int = 30) -> Volume:
    """Volumes of P^n and M^n = 2^c copies; Gauss-Bonnet in even dimension, special values otherwise."""
    c = COLOUR_COUNT[n] if c is None else c
    with mpmath.workdps(dps):
        if n % 2 == 0:
            if chi_p is None:
                chi_p = gosset.euler_characteristic(gosset.build(n))
            m = n // 2
            coef = Fraction((-2) ** m, _double_factorial(n - 1)) * chi_p
            poly = mpmath.mpf(coef.numerator) / coef.denominator * mpmath.pi**m
            label = f"{_coefficient_text(coef * 2**c)}*pi^{m}"
        else:
            coef, name, value = _ODD_VOLUMES[n]
            poly = mpmath.mpf(coef.numerator) / coef.denominator * value()
            label = f"{_coefficient_text(coef * 2**c)}*{name}"
        return Volume(n, +poly, poly * 2**c, label)


@dataclass
class ManifoldReport:
    n: int
    c: int
    chi_p: Fraction
    chi_m: int
    betti: BettiVector
    census: CuspCensus
    volume: Volume
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def total_cusps(self) -> int:
        return self.census.total

    def checks(self) -> dict[str, bool]:
        b = self.betti.values
        return {
            "alternating_sum_matches_euler": self.betti.euler_characteristic() == self.chi_m,
            "connected": b[0] == 1,
            "last_betti_is_cusps_minus_one": b[self.n - 1] == self.total_cusps - 1,
        }

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "version": SCHEMA_VERSION,
            "n": self.n,
            "colours": self.c,
            "chi_P": str(self.chi_p),
            "chi_M": self.chi_m,
            "betti": list(self.betti.values),
            "cusps": self.census.to_json(),
            "volume": self.volume.to_json(),
            "checks": self.checks(),
            **self.extra,
        }

    @staticmethod
    def csv_header() -> list[str]:
        return ["manifold", "euler"] + [f"b{k}" for k in range(1, 8)] + ["cusps", "volume", "volume_closed_form"]

    def csv_row(self) -> list[str]:
        b = list(self.betti.values[1:8]) + [0] * (8 - len(self.betti.values))
        return (
            [f"M{self.n}", str(self.chi_m)]
            + [str(x) for x in b[:7]]
            + [str(self.total_cusps), mpmath.nstr(self.volume.manifold, 12), self.volume.label]
        )


def manifold_report(
    q: GossetPolytope,
    col: Colouring,
    symmetry: Sequence[Sequence[int]] | None = None,
    workers: int = 1,
) -> ManifoldReport:
    col.validate(q)
    chi_p, chi_m = euler_characteristics(q, col.c)
    betti = betti_of_manifold(q, col, symmetry, workers)
    return ManifoldReport(q.n, col.c, chi_p, chi_m, betti, cusp_census(q, col), volume(q.n, chi_p, col.c))


def pair_candidates(q: GossetPolytope) -> list[tuple[int, Colouring, bool]]:
    """Every colouring by pairs with a flag telling whether it reproduces the reference invariants."""
    return [(i, col, _fits_reference(q, col)) for i, col in enumerate(enumerate_pair_colourings(q))]


__all__ = [
    "Colouring",
    "CuspCensus",
    "CuspEntry",
    "ManifoldReport",
    "Volume",
    "betti_of_manifold",
    "colouring_is_minimal",
    "cusp_census",
    "enumerate_pair_colourings",
    "euler_characteristics",
    "manifold_report",
    "max_disjoint_facets",
    "builtin_colouring",
    "volume",
]
