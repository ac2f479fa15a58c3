from __future__ import annotations

import numpy as np

from gosset_fibering.complex import FlagComplex, betti_numbers
from gosset_fibering.symmetry import (
    class_automorphisms,
    colour_permutations,
    induced_colour_permutation,
    subset_orbits,
    verify_class_automorphism,
)
from support import colouring, polytope


def test_class_automorphisms_are_verified() -> None:
    q, col = polytope(5), colouring(5)
    autos = class_automorphisms(q.neighbours, col.colours)
    assert autos
    for g in autos:
        assert verify_class_automorphism(q.neighbours, col.colours, g)
    bogus = list(range(q.size))
    bogus[0], bogus[1] = bogus[1], bogus[0]
    assert not verify_class_automorphism(q.neighbours, col.colours, bogus)


def test_induced_colour_permutation() -> None:
    colours = (0, 0, 1, 1)
    assert induced_colour_permutation(colours, [2, 3, 0, 1]) == (1, 0)
    assert induced_colour_permutation(colours, [0, 2, 1, 3]) is None


def test_subset_orbits_partition_the_cube() -> None:
    assert subset_orbits(3, []) == [(w, 1) for w in range(8)]
    cyc = subset_orbits(3, [(1, 2, 0)])
    assert sum(s for _, s in cyc) == 8
    assert sorted(s for _, s in cyc) == [1, 1, 3, 3]


def test_betti_numbers_are_constant_on_subset_orbits() -> None:
    q, col = polytope(5), colouring(5)
    perms = colour_permutations(q.neighbours, col.colours)
    orbits = subset_orbits(col.c, perms)
    assert sum(s for _, s in orbits) == 1 << col.c
    k = FlagComplex(q.neighbours)
    masks = col.class_masks()

    def mask(w: int) -> int:
        return sum(m for j, m in enumerate(masks) if w >> j & 1)

    for w in range(1 << col.c):
        for p in perms:
            image = sum(1 << p[j] for j in range(col.c) if w >> j & 1)
            assert betti_numbers(k.induced(mask(w))) == betti_numbers(k.induced(mask(image)))


def test_4_21_hextet_symmetry() -> None:
    q, col = polytope(8), colouring(8)
    perms = colour_permutations(q.neighbours, col.colours)
    orbits = subset_orbits(col.c, perms)
    assert len(orbits) == 46
    assert sum(s for _, s in orbits) == 1 << 15
    assert all(sorted(p) == list(range(15)) for p in perms)
    assert np.all(np.diff([r for r, _ in orbits]) > 0)
