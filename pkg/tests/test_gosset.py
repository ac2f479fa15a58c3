from __future__ import annotations

import copy
import itertools
from fractions import Fraction

import networkx as nx
import pytest

from gosset_fibering import gosset
from gosset_fibering.complex import bits
from gosset_fibering.gosset import DEGREE, FACET_COUNTS, ValidationError
from support import polytope


def _graph(q: gosset.GossetPolytope, mask: int | None = None) -> nx.Graph:
    keep = range(q.size) if mask is None else bits(mask)
    g = nx.Graph()
    g.add_nodes_from(keep)
    for u in keep:
        for v in bits(q.neighbours[u]):
            if mask is None or mask >> v & 1:
                g.add_edge(u, v)
    return g


@pytest.mark.parametrize("n", range(3, 9))
def test_counts_and_degrees(n: int) -> None:
    q = polytope(n)
    assert q.counts() == FACET_COUNTS[n]
    assert set(q.degrees()) == {DEGREE[n]}
    gosset.validate(q)


@pytest.mark.parametrize("n", range(4, 9))
def test_vertex_figure_is_the_previous_gosset_polytope(n: int) -> None:
    q, prev = polytope(n), polytope(n - 1)
    for v in (0, q.size - 1):
        assert nx.is_isomorphic(_graph(q, q.neighbours[v]), _graph(prev))


@pytest.mark.parametrize("n", range(3, 9))
def test_facet_incidences_are_uniform(n: int) -> None:
    q = polytope(n)
    simplex = [0] * q.size
    for f in q.simplex_facets:
        for v in f:
            simplex[v] += 1
    ortho = [0] * q.size
    for f in q.orthoplex_facets:
        assert len(f) == n - 1
        for p in f:
            assert not q.adjacent(*p)
            for v in p:
                ortho[v] += 1
    assert len(set(simplex)) == 1 and simplex[0] * q.size == n * len(q.simplex_facets)
    assert len(set(ortho)) == 1 and ortho[0] * q.size == 2 * (n - 1) * len(q.orthoplex_facets)


def test_3_21_incidences() -> None:
    q = polytope(7)
    per_vertex_simplices = 7 * 576 // 56
    per_vertex_orthoplexes = 12 * 126 // 56
    assert (per_vertex_simplices, per_vertex_orthoplexes) == (72, 27)
    assert sum(1 for f in q.simplex_facets if 0 in f) == 72
    assert sum(1 for f in q.orthoplex_facets if any(0 in p for p in f)) == 27


def test_4_21_coordinates() -> None:
    q = polytope(8)
    assert q.coordinate_scale == 2
    for u in range(0, 240, 17):
        products = [sum(a * b for a, b in zip(q.vertices[u], q.vertices[w])) for w in range(240)]
        # doubled scalar products: 4 (self), 2, 0, -2, -4 (antipode) occur 1, 56, 126, 56, 1 times
        assert sorted(set(products)) == [-4, -2, 0, 2, 4]
        assert [products.count(x) for x in (4, 2, 0, -2, -4)] == [1, 56, 126, 56, 1]
        assert {w for w in range(240) if products[w] == 2} == set(bits(q.neighbours[u]))


@pytest.mark.parametrize("n", range(3, 9))
def test_face_vector_is_consistent(n: int) -> None:
    q = polytope(n)
    f = gosset.face_vector(q)
    assert f[0] == FACET_COUNTS[n][2]
    assert f[n - 1] == FACET_COUNTS[n][0]
    assert f[n] == 1
    # clique counts by brute force on the small cases
    if n <= 5:
        g = _graph(q)
        sizes = [len(c) for c in nx.enumerate_all_cliques(g)]
        assert [sizes.count(k) for k in range(1, n + 1)] == gosset.clique_counts(q)


def test_euler_characteristics() -> None:
    chi = {n: gosset.euler_characteristic(polytope(n)) for n in range(3, 9)}
    assert chi == {3: 0, 4: Fraction(1, 16), 5: 0, 6: Fraction(-1, 8), 7: 0, 8: Fraction(17, 2)}
    assert all(isinstance(x, Fraction) for x in chi.values())


@pytest.mark.parametrize("n", [3, 5, 7])
def test_json_round_trip(n: int) -> None:
    q = polytope(n)
    back = gosset.from_json(gosset.to_json(q))
    assert back.vertices == q.vertices
    assert back.neighbours == q.neighbours
    assert back.orthoplex_facets == q.orthoplex_facets


def test_validation_rejects_a_broken_polytope() -> None:
    q = copy.deepcopy(polytope(5))
    u, v = next((u, v) for u, v in itertools.combinations(range(q.size), 2) if q.adjacent(u, v))
    q.neighbours[u] &= ~(1 << v)
    q.neighbours[v] &= ~(1 << u)
    with pytest.raises(ValidationError):
        gosset.validate(q)
    doc = gosset.to_json(polytope(4))
    doc["version"] = 99
    with pytest.raises(ValidationError):
        gosset.from_json(doc)


def test_unknown_dimension() -> None:
    with pytest.raises(ValueError):
        gosset.build(9)
