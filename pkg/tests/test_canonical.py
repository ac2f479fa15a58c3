from __future__ import annotations

import itertools
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gosset_fibering.canonical import automorphism_generators, canonical_form, canonical_labelling, refine
from gosset_fibering.complex import FlagComplex
from support import colouring, polytope


def _adj(n: int, edges) -> np.ndarray:
    a = np.zeros((n, n), dtype=np.uint8)
    for u, v in edges:
        a[u, v] = a[v, u] = 1
    return a


def _relabel(a: np.ndarray, perm: np.ndarray) -> np.ndarray:
    # vertex i of the result is vertex perm[i] of a
    return a[np.ix_(perm, perm)]


def _sample_graphs() -> list[np.ndarray]:
    rng = random.Random(7)
    q6, q7 = polytope(6), polytope(7)
    k7 = FlagComplex(q7.neighbours)
    half = k7.induced(colouring(7).subset_mask(0b10110010110101))
    rand = _adj(20, [e for e in itertools.combinations(range(20), 2) if rng.random() < 0.3])
    return [polytope(5).adjacency_matrix, q6.adjacency_matrix, half.adjacency_matrix(), rand]


@pytest.mark.properties
def test_certificate_is_invariant_under_1000_relabelings() -> None:
    rng = np.random.default_rng(2024)
    graphs = _sample_graphs()
    reference = [canonical_labelling(a)[1] for a in graphs]
    for i in range(1000):
        a = graphs[i % len(graphs)]
        perm = rng.permutation(a.shape[0])
        assert canonical_labelling(_relabel(a, perm))[1] == reference[i % len(graphs)]


def test_canonical_order_reproduces_the_certificate() -> None:
    for a in _sample_graphs():
        order, cert, _ = canonical_labelling(a)
        b = a[np.ix_(order, order)].astype(bool)
        assert np.packbits(b[np.triu_indices(len(order), 1)]).tobytes() == cert.packed


graph_cases = st.integers(1, 7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.sampled_from(list(itertools.combinations(range(n), 2)))) if n > 1 else st.just(set()),
        st.sets(st.sampled_from(list(itertools.combinations(range(n), 2)))) if n > 1 else st.just(set()),
    )
)


@pytest.mark.properties
@settings(max_examples=300, deadline=None)
@given(graph_cases)
def test_certificates_agree_with_networkx_isomorphism(case) -> None:
    n, e1, e2 = case
    g1, g2 = nx.Graph(), nx.Graph()
    g1.add_nodes_from(range(n))
    g2.add_nodes_from(range(n))
    g1.add_edges_from(e1)
    g2.add_edges_from(e2)
    same = canonical_labelling(_adj(n, e1))[1] == canonical_labelling(_adj(n, e2))[1]
    assert same == nx.is_isomorphic(g1, g2)


def test_vertex_colours_are_respected() -> None:
    path = _adj(3, [(0, 1), (1, 2)])
    a = canonical_labelling(path, [1, 0, 0])[1]
    b = canonical_labelling(path, [0, 0, 1])[1]
    c = canonical_labelling(path, [0, 1, 0])[1]
    assert a == b
    assert a != c


def test_automorphisms_of_the_petersen_complement() -> None:
    # 0_21 has the symmetric group S_5 as automorphism group
    a = polytope(4).adjacency_matrix
    gens = automorphism_generators(a)
    assert gens
    group = {tuple(range(10))}
    frontier = list(group)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple(int(g[i]) for i in x)
            if y not in group:
                group.add(y)
                frontier.append(y)
    assert len(group) == 120


def test_refinement_is_equitable() -> None:
    a = _adj(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
    cells = refine(a.astype(float), np.zeros(6, dtype=np.int64))
    assert cells[0] == cells[5] and cells[1] == cells[4] and cells[2] == cells[3]
    assert len(set(cells.tolist())) == 3


def test_empty_graph() -> None:
    order, cert, autos = canonical_labelling(np.zeros((0, 0), dtype=np.uint8))
    assert len(order) == 0 and cert.size == 0 and autos == []
    k = FlagComplex([0, 0])
    assert canonical_form(k.induced(0)) == canonical_form(FlagComplex([]).full())
