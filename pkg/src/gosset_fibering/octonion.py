"""Exact octonions over the half-integers and the vertex sets built from them.

Coefficients are stored doubled, so every element of (1/2)Z^8 is a tuple of
eight plain integers.  Index 0 is the real unit, indices 1..7 are e_1..e_7 and
the multiplication of the imaginary units follows the oriented Fano plane
with lines (n, n+1, n+3) mod 7.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .status import Status

DIM = 8


def _mod7(k: int) -> int:
    return (k - 1) % 7 + 1


def fano_line(n: int) -> tuple[int, int, int]:
    """The cyclically ordered line (e_n, e_{n+1}, e_{n+3})."""
    return (_mod7(n), _mod7(n + 1), _mod7(n + 3))


@dataclass(frozen=True)
class FanoPlane:
    lines: tuple[tuple[int, int, int], ...]

    @classmethod
    def standard(cls) -> "FanoPlane":
        return cls(tuple(fano_line(n) for n in range(1, 8)))

    def line_through(self, i: int, j: int) -> tuple[int, int, int]:
        for line in self.lines:
            if i in line and j in line:
                return line
        raise ValueError(f"no line through {i} and {j}")

    def collinear(self, i: int, j: int, k: int) -> bool:
        if len({i, j, k}) < 3:
            return True
        return set(self.line_through(i, j)) == {i, j, k}


FANO = FanoPlane.standard()


def _build_table() -> tuple[tuple[tuple[int, int], ...], ...]:
    # table[i][j] = (k, sign) with e_i e_j = sign * e_k
    table = [[(0, 0)] * DIM for _ in range(DIM)]
    for i in range(DIM):
        table[0][i] = (i, 1)
        table[i][0] = (i, 1)
    for i in range(1, DIM):
        table[i][i] = (0, -1)
    for a, b, c in FANO.lines:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            table[x][y] = (z, 1)
            table[y][x] = (z, -1)
    return tuple(tuple(row) for row in table)


MULTIPLICATION_TABLE = _build_table()


@dataclass(frozen=True, order=True)
class Octonion:
    """An octonion with coefficients in (1/2)Z, stored as doubled integers."""

    doubled: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.doubled) != DIM:
            raise ValueError("an octonion has exactly 8 coefficients")

    @classmethod
    def unit(cls, index: int, sign: int = 1) -> "Octonion":
        coeffs = [0] * DIM
        coeffs[index] = 2 * sign
        return cls(tuple(coeffs))

    @classmethod
    def half(cls, signed_support: dict[int, int]) -> "Octonion":
        """(1/2) * sum of sign * e_index over the given support."""
        coeffs = [0] * DIM
        for index, sign in signed_support.items():
            coeffs[index] = sign
        return cls(tuple(coeffs))

    @classmethod
    def from_fractions(cls, coeffs: Sequence[Fraction | int]) -> "Octonion":
        doubled = []
        for x in coeffs:
            y = Fraction(x) * 2
            if y.denominator != 1:
                raise ValueError(f"coefficient {x} is not a half-integer")
            doubled.append(int(y))
        return cls(tuple(doubled))

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, 2) for x in self.doubled)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.doubled) if x)

    def __neg__(self) -> "Octonion":
        return Octonion(tuple(-x for x in self.doubled))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(tuple(a + b for a, b in zip(self.doubled, other.doubled)))

    def __sub__(self, other: "Octonion") -> "Octonion":
        return self + (-other)

    def __mul__(self, other: "Octonion") -> "Octonion":
        return multiply(self, other)

    def conjugate(self) -> "Octonion":
        return Octonion((self.doubled[0],) + tuple(-x for x in self.doubled[1:]))

    def dot(self, other: "Octonion") -> Fraction:
        return Fraction(self.doubled_dot(other), 4)

    def doubled_dot(self, other: "Octonion") -> int:
        """Four times the Euclidean scalar product (an exact integer)."""
        return sum(a * b for a, b in zip(self.doubled, other.doubled))

    def norm(self) -> Fraction:
        return self.dot(self)

    def __str__(self) -> str:
        names = ["1"] + [f"e{i}" for i in range(1, DIM)]
        terms = []
        for name, x in zip(names, self.doubled):
            if x:
                terms.append(("-" if x < 0 else "+") + ("" if abs(x) == 2 else f"{abs(x)}/2") + name)
        if not terms:
            return "0"
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text


def multiply(a: Octonion, b: Octonion) -> Octonion:
    """Exact octonion product; raises if the result leaves (1/2)Z^8."""
    acc = [0] * DIM
    for i, x in enumerate(a.doubled):
        if not x:
            continue
        row = MULTIPLICATION_TABLE[i]
        for j, y in enumerate(b.doubled):
            if y:
                k, sign = row[j]
                acc[k] += sign * x * y
    # acc holds 4 * (true coefficient); doubled coefficient is acc / 2
    if any(v % 2 for v in acc):
        raise ValueError("product is not in the half-integer lattice")
    return Octonion(tuple(v // 2 for v in acc))


ONE = Octonion.unit(0)


def basis_unit(i: int) -> Octonion:
    return Octonion.unit(i)


def _signed(support: Sequence[int], signs: Sequence[int]) -> Octonion:
    return Octonion.half(dict(zip(support, signs)))


def line_supports(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two complementary 4-supports {0, n, n+1, n+3} and the rest."""
    first = (0,) + fano_line(n)
    second = tuple(sorted(set(range(DIM)) - set(first)))
    return tuple(sorted(first)), second


def _minus_parity(o: Octonion) -> int:
    return sum(1 for x in o.doubled if x < 0) % 2


@dataclass(frozen=True)
class UnitSet:
    kind: str
    elements: tuple[Octonion, ...]
    label: str = ""

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Octonion]:
        return iter(self.elements)

    def __contains__(self, o: object) -> bool:
        return o in self.elements


def unit_set_s() -> UnitSet:
    """S = {+-1, +-e_1, ..., +-e_7}."""
    elems = []
    for i in range(DIM):
        elems += [Octonion.unit(i), Octonion.unit(i, -1)]
    return UnitSet("S", tuple(elems), "S")


def quaternion_units() -> UnitSet:
    """Q = {+-1, +-e_1, +-e_2, +-e_4}."""
    elems = []
    for i in (0, 1, 2, 4):
        elems += [Octonion.unit(i), Octonion.unit(i, -1)]
    return UnitSet("UnitQuaternionSet", tuple(elems), "Q")


@lru_cache(maxsize=None)
def hextets() -> tuple[UnitSet, ...]:
    """The 15 hextets in canonical order.

    Hextet 0 is S; then for n = 1..7 the even and the odd hextet of the line
    (n, n+1, n+3), each made of the half-integer vectors on the two
    complementary supports with that parity of minus signs.
    """
    out = [UnitSet("Hextet", unit_set_s().elements, "S")]
    for n in range(1, 8):
        supports = line_supports(n)
        for parity in (0, 1):
            elems = []
            for support in supports:
                for signs in itertools.product((1, -1), repeat=4):
                    if sum(1 for s in signs if s < 0) % 2 == parity:
                        elems.append(_signed(support, signs))
            out.append(UnitSet("Hextet", tuple(elems), f"n={n},{'even' if parity == 0 else 'odd'}"))
    return tuple(out)


def hextet_index(o: Octonion) -> int:
    """Index (0..14) of the hextet containing a vertex of 4_21."""
    support = o.support
    if len(support) == 1:
        return 0
    for n in range(1, 8):
        if support in line_supports(n):
            return 1 + 2 * (n - 1) + _minus_parity(o)
    raise ValueError(f"{o} is not a vertex of 4_21")


@lru_cache(maxsize=None)
def gosset240_vertices() -> tuple[Octonion, ...]:
    """The 240 vertices of 4_21, listed hextet by hextet."""
    return tuple(o for h in hextets() for o in h.elements)


@lru_cache(maxsize=None)
def quartets() -> tuple[UnitSet, ...]:
    """The 14 quartets of 3_21, indexed by (n, parity) like the hextets."""
    out = []
    for n in range(1, 8):
        line = fano_line(n)
        for parity in (0, 1):
            elems = []
            for signs in itertools.product((1, -1), repeat=3):
                if sum(1 for s in signs if s < 0) % 2 == parity:
                    elems.append(Octonion.half({0: 1, **dict(zip(line, signs))}))
            out.append(UnitSet("Quartet", tuple(sorted(elems, reverse=True)), f"n={n},{'even' if parity == 0 else 'odd'}"))
    return tuple(out)


def base_elements() -> tuple[Octonion, ...]:
    """One base element per hextet: 1, then (1/2)(+-1 + e_n + e_{n+1} + e_{n+3})."""
    out = [ONE]
    for n in range(1, 8):
        line = fano_line(n)
        for real in (1, -1):
            out.append(Octonion.half({0: real, **{i: 1 for i in line}}))
    return tuple(out)


def p8_state_seed() -> dict[Octonion, Status]:
    """Status O on Q times the base element of each hextet, I elsewhere."""
    q = quaternion_units().elements
    status: dict[Octonion, Status] = {}
    for hextet, base in zip(hextets(), base_elements()):
        if base not in hextet:
            raise AssertionError(f"base element {base} is not in hextet {hextet.label}")
        outward = {u * base for u in q}
        for o in hextet.elements:
            status[o] = Status.OUT if o in outward else Status.IN
    return status


def left_orbit(units: Iterable[Octonion], x: Octonion) -> set[Octonion]:
    return {u * x for u in units}
