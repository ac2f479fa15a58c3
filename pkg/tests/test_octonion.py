from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gosset_fibering.octonion import (
    FANO,
    ONE,
    Octonion,
    base_elements,
    fano_line,
    gosset240_vertices,
    hextet_index,
    hextets,
    left_orbit,
    multiply,
    quartets,
    quaternion_units,
    unit_set_s,
)

UNITS = unit_set_s().elements  # +-1, +-e_1 .. +-e_7


def e(i: int, sign: int = 1) -> Octonion:
    return Octonion.unit(i, sign)


def _assoc(x: Octonion, y: Octonion, z: Octonion) -> Octonion:
    return (x * y) * z - x * (y * z)


def test_fano_lines_follow_the_cyclic_rule() -> None:
    assert FANO.lines[0] == (1, 2, 4)
    assert set(FANO.lines) == {fano_line(n) for n in range(1, 8)}
    for i, j in itertools.combinations(range(1, 8), 2):
        assert sum(1 for line in FANO.lines if i in line and j in line) == 1


@pytest.mark.parametrize("n", range(1, 8))
def test_line_products(n: int) -> None:
    a, b, c = fano_line(n)
    assert e(a) * e(b) == e(c)
    assert e(b) * e(c) == e(a)
    assert e(c) * e(a) == e(b)
    assert e(b) * e(a) == e(c, -1)


@pytest.mark.properties
def test_unit_laws_over_all_triples() -> None:
    zero = Octonion((0,) * 8)
    for x in UNITS:
        assert x * ONE == x == ONE * x
        assert x * x.conjugate() == ONE
        if x.doubled[0] == 0:
            assert x * x == -ONE
    for x, y in itertools.product(UNITS, repeat=2):
        assert (x * y).norm() == 1
        if x.doubled[0] == 0 and y.doubled[0] == 0 and x != y and x != -y:
            assert x * y == -(y * x)
        # alternative laws
        assert _assoc(x, x, y) == zero
        assert _assoc(x, y, y) == zero
    for x, y, z in itertools.product(UNITS, repeat=3):
        # Moufang identity z(x(zy)) = ((zx)z)y
        assert z * (x * (z * y)) == ((z * x) * z) * y
        # imaginary units on a common line associate, others anti-associate
        i, j, k = (next(t for t, c in enumerate(u.doubled) if c) for u in (x, y, z))
        if 0 in (i, j, k) or FANO.collinear(i, j, k):
            assert _assoc(x, y, z) == zero
        else:
            assert (x * y) * z == -(x * (y * z))


half_octonions = st.lists(st.integers(-3, 3), min_size=8, max_size=8).map(lambda xs: Octonion(tuple(2 * x for x in xs)))


@pytest.mark.properties
@settings(max_examples=200, deadline=None)
@given(half_octonions, half_octonions)
def test_norm_is_multiplicative(x: Octonion, y: Octonion) -> None:
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conjugate() == y.conjugate() * x.conjugate()


def test_product_leaving_the_lattice_is_rejected() -> None:
    half = Octonion.half({0: 1, 1: 1, 2: 1, 4: 1})
    with pytest.raises(ValueError):
        multiply(half, Octonion.half({0: 1, 3: 1, 5: 1, 7: 1}))


def test_from_fractions_round_trip() -> None:
    o = Octonion.from_fractions([Fraction(1, 2)] * 4 + [0] * 4)
    assert o.coefficients[:4] == (Fraction(1, 2),) * 4
    with pytest.raises(ValueError):
        Octonion.from_fractions([Fraction(1, 3)] + [0] * 7)


@pytest.mark.properties
def test_hextets_partition_the_240_unit_octonions() -> None:
    hs = hextets()
    assert len(hs) == 15
    assert all(len(h) == 16 for h in hs)
    verts = gosset240_vertices()
    assert len(set(verts)) == 240
    assert all(v.norm() == 1 for v in verts)
    for k, h in enumerate(hs):
        assert all(hextet_index(v) == k for v in h)
    # 16 signed basis units, the rest have four coefficients +-1/2
    assert sum(1 for v in verts if len(v.support) == 1) == 16
    assert sum(1 for v in verts if len(v.support) == 4) == 224


@pytest.mark.properties
def test_hextets_are_right_cosets_of_s_with_free_transitive_action() -> None:
    s = unit_set_s().elements
    for h, base in zip(hextets(), base_elements()):
        members = set(h.elements)
        assert base in members
        # S acts on the left: closed, free and transitive on every hextet
        for x in members:
            orbit = [u * x for u in s]
            assert set(orbit) == members
            assert len(set(orbit)) == 16
        assert left_orbit(s, base) == members


@pytest.mark.properties
def test_s_is_closed_under_products() -> None:
    s = set(UNITS)
    assert all(x * y in s for x, y in itertools.product(UNITS, repeat=2))


def test_quaternion_units_form_a_group() -> None:
    q = set(quaternion_units().elements)
    assert len(q) == 8
    assert all(x * y in q for x, y in itertools.product(q, repeat=2))


def test_quartets() -> None:
    qs = quartets()
    assert len(qs) == 14
    assert all(len(x) == 4 for x in qs)
    elems = [o for x in qs for o in x]
    assert len(set(elems)) == 56
    assert all(o.doubled[0] == 1 and o.norm() == 1 for o in elems)
