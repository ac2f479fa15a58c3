from __future__ import annotations

import itertools
import json
from fractions import Fraction

import mpmath
import networkx as nx
import pytest

from gosset_fibering import manifold
from gosset_fibering.gosset import ValidationError
from gosset_fibering.manifold import (
    COLOUR_COUNT,
    REFERENCE_BETTI,
    REFERENCE_CUSPS,
    Colouring,
    betti_of_manifold,
    colouring_is_minimal,
    cusp_census,
    enumerate_pair_colourings,
    euler_characteristics,
    hoffman_bound,
    listed_triplets,
    max_disjoint_facets,
    volume,
)
from oracles import independence_number
from support import colouring, polytope


def test_colouring_validation_names_the_clash() -> None:
    q = polytope(4)
    col = colouring(4)
    col.validate(q)
    u = next(v for v in range(q.size) if q.adjacent(0, v))
    bad = list(col.colours)
    bad[u] = bad[0]
    with pytest.raises(ValidationError, match="adjacent facets"):
        Colouring(tuple(bad)).validate(q)
    with pytest.raises(ValidationError, match="entries"):
        Colouring(col.colours[:-1]).validate(q)


def test_unused_colour_is_reported() -> None:
    q = polytope(3)
    col = Colouring((0, 1, 3, 3, 0, 1))
    with pytest.raises(ValidationError, match="not used"):
        col.validate(q)


def test_colouring_json_round_trip(tmp_path) -> None:
    col = colouring(5)
    path = tmp_path / "col.json"
    path.write_text(json.dumps(col.to_json()))
    assert manifold.load_colouring(str(path)) == col
    assert min(col.to_json()["colours"].values()) == 1
    with pytest.raises(ValidationError):
        Colouring.from_json({"colours": {"0": 1, "2": 2}})
    with pytest.raises(ValidationError):
        Colouring.from_json({"colours": {"0": 0}})


def test_petersen_has_six_perfect_matchings() -> None:
    q = polytope(4)
    # brute force over all pairings of the ten facets into non-adjacent pairs
    def pairings(rest):
        if not rest:
            yield []
            return
        u = rest[0]
        for v in rest[1:]:
            if not q.adjacent(u, v):
                for tail in pairings([x for x in rest[1:] if x != v]):
                    yield [(u, v)] + tail

    brute = list(pairings(list(range(10))))
    found = enumerate_pair_colourings(q)
    assert len(brute) == len(found) == 6
    assert {Colouring.from_classes(p, 10) for p in brute} == set(found)


def test_demicube_pair_colourings() -> None:
    q = polytope(5)
    cols = enumerate_pair_colourings(q)
    assert len(cols) == 705
    assert len(set(cols)) == 705
    for col in cols[:50]:
        col.validate(q)
    assert colouring(5) == cols[0]


def test_listed_triplets_are_independent_and_cover() -> None:
    q = polytope(6)
    trips = listed_triplets(q)
    assert len(trips) == 9
    assert sorted(v for t in trips for v in t) == list(range(27))
    for t in trips:
        assert not any(q.adjacent(u, v) for u, v in itertools.combinations(t, 2))


@pytest.mark.parametrize("n,sizes", [(3, 2), (4, 2), (5, 2), (6, 3), (7, 4), (8, 16)])
def test_builtin_colourings(n: int, sizes: int) -> None:
    col = colouring(n)
    col.validate(polytope(n))
    assert col.c == COLOUR_COUNT[n]
    assert set(col.class_sizes()) == {sizes}


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_betti_numbers_of_small_manifolds(n: int) -> None:
    q, col = polytope(n), colouring(n)
    b = betti_of_manifold(q, col)
    assert b.values == REFERENCE_BETTI[n]
    rep = manifold.manifold_report(q, col)
    assert all(rep.checks().values())


def test_betti_numbers_with_worker_processes() -> None:
    q, col = polytope(5), colouring(5)
    assert betti_of_manifold(q, col, workers=2) == betti_of_manifold(q, col, workers=1)


@pytest.mark.parametrize("n", range(3, 9))
def test_euler_characteristics_are_exact(n: int) -> None:
    chi_p, chi_m = euler_characteristics(polytope(n), COLOUR_COUNT[n])
    assert isinstance(chi_p, Fraction)
    assert chi_m == {3: 0, 4: 2, 5: 0, 6: -64, 7: 0, 8: 278528}[n]
    b = REFERENCE_BETTI[n]
    assert sum((-1) ** k * x for k, x in enumerate(b)) == chi_m


@pytest.mark.parametrize(
    "n,breakdown",
    [
        (3, None),
        (4, None),
        (5, [(4, 2, 16), (8, 8, 1)]),
        (6, [(9, 27, 1)]),
        (7, [(6, 14, 256), (12, 112, 4)]),
        (8, [(7, 240, 256), (14, 1920, 2)]),
    ],
)
def test_cusp_census(n: int, breakdown) -> None:
    census = cusp_census(polytope(n), colouring(n))
    assert census.total == REFERENCE_CUSPS[n]
    assert REFERENCE_BETTI[n][n - 1] == census.total - 1
    if breakdown is not None:
        assert census.breakdown() == breakdown


@pytest.mark.properties
def test_independence_numbers() -> None:
    got = [max_disjoint_facets(polytope(n)) for n in range(3, 9)]
    assert got == [2, 2, 2, 3, 4, 16]
    for n in (3, 4):
        q = polytope(n)
        assert independence_number(q.size, q.adjacent) == got[n - 3]
    for n in (5, 6):
        q = polytope(n)
        g = nx.complement(nx.from_numpy_array(q.adjacency_matrix))
        assert len(nx.max_weight_clique(g, weight=None)[0]) == got[n - 3]


def test_hoffman_bound_is_attained_on_4_21() -> None:
    q = polytope(8)
    assert hoffman_bound(q) == 16
    hextet = colouring(8).classes()[0]
    assert len(hextet) == 16
    assert not any(q.adjacent(u, v) for u, v in itertools.combinations(hextet, 2))


@pytest.mark.parametrize("n", range(3, 9))
def test_colourings_are_minimal(n: int) -> None:
    alpha = [2, 2, 2, 3, 4, 16][n - 3]
    assert colouring_is_minimal(polytope(n), COLOUR_COUNT[n], alpha)
    assert not colouring_is_minimal(polytope(n), COLOUR_COUNT[n] + 1, alpha)


def test_volumes() -> None:
    mpmath.mp.dps = 40
    catalan = +mpmath.catalan
    beta4 = mpmath.dirichlet(4, [0, 1, 0, -1])
    expected = {
        3: (catalan, "8*L(2)", 8 * catalan),
        4: (mpmath.pi**2 / 12, "8/3*pi^2", mpmath.pi**2 * 8 / 3),
        5: (7 * mpmath.zeta(3) / 8, "224*zeta(3)", 224 * mpmath.zeta(3)),
        6: (mpmath.pi**3 / 15, "512/15*pi^3", 512 * mpmath.pi**3 / 15),
        7: (8 * beta4, "131072*L(4)", 131072 * beta4),
        8: (136 * mpmath.pi**4 / 105, "4456448/105*pi^4", 4456448 * mpmath.pi**4 / 105),
    }
    for n, (poly, label, total) in expected.items():
        v = volume(n, dps=35)
        assert v.label == label
        assert abs(v.polytope - poly) < mpmath.mpf(10) ** -28
        assert abs(v.manifold - total) < mpmath.mpf(10) ** -25
    assert abs(volume(3).manifold - mpmath.mpf("7.327724753")) < 1e-8
