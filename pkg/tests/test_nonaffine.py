# test_nonaffine.py

import networkx as nx
import numpy as np
import pytest

from twoclosure.nonaffine import (
    almost_simple_closure,
    imprimitive_closure,
    orbital_graph,
    product_closure,
    recognize_h2,
    run_nonaffine,
)
from twoclosure.orbitals import two_orbits
from twoclosure.perm import BlockSystem
from twoclosure.zoo import zoo_imprimitive, zoo_johnson_pairs, zoo_paley, zoo_product


def rook_graph(q: int) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(q * q))
    for x in range(q * q):
        for y in range(x + 1, q * q):
            if (x // q == y // q) != (x % q == y % q):
                graph.add_edge(x, y)
    return graph


def test_square_imprimitive(d4):
    outcome = run_nonaffine(d4)
    assert outcome.succeeded
    assert outcome.order == 8
    assert outcome.flags["case"] == "imprimitive"


def test_small_wreath_is_closed():
    group = zoo_imprimitive("S3", 2).group
    outcome = run_nonaffine(group)
    assert outcome.order == 72


def test_f20_wreath():
    outcome = run_nonaffine(zoo_imprimitive("F20", 3).group)
    assert outcome.succeeded
    assert outcome.order == 10368000


def test_imprimitive_closure_rejects_trivial_blocks(d4):
    with pytest.raises(ValueError):
        imprimitive_closure(d4, BlockSystem(((0, 1, 2, 3),)))


def test_recognize_rook_graph():
    labelling = recognize_h2(rook_graph(4))
    assert labelling is not None
    grid = labelling.grid()
    assert sorted(grid.ravel().tolist()) == list(range(16))
    # rows of the labelling are lines of the graph
    graph = rook_graph(4)
    for r in range(4):
        line = grid[r].tolist()
        assert all(graph.has_edge(x, y) for i, x in enumerate(line) for y in line[i + 1:])


def test_shrikhande_is_rejected():
    # Cayley graph of Z4 x Z4 with connection set {+-(1,0), +-(0,1), +-(1,1)}
    graph = nx.Graph()
    graph.add_nodes_from(range(16))
    steps = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    for a in range(4):
        for b in range(4):
            for s, t in steps:
                graph.add_edge(4 * a + b, 4 * ((a + s) % 4) + (b + t) % 4)
    assert all(d == 6 for _, d in graph.degree())
    assert recognize_h2(graph) is None


def test_product_closure_order():
    labelling = recognize_h2(rook_graph(3))
    assert product_closure(labelling).order == 72


def test_product_groups():
    assert run_nonaffine(zoo_product("S3").group).order == 72
    outcome = run_nonaffine(zoo_product("S4").group)
    assert outcome.order == 1152
    assert outcome.flags["case"] == "product"


def test_f20_product():
    outcome = run_nonaffine(zoo_product("F20").group)
    assert outcome.succeeded
    assert outcome.order == 28800
    assert outcome.flags["case"] == "product"


def test_orbital_graph_of_petersen():
    structure = two_orbits(zoo_johnson_pairs(5).group)
    graph = orbital_graph(structure, structure.smallest_color())
    assert graph.number_of_edges() == 15
    assert all(d == 3 for _, d in graph.degree())


def test_almost_simple():
    group = zoo_johnson_pairs(5).group
    assert almost_simple_closure(group).order == 120
    outcome = run_nonaffine(group)
    assert outcome.order == 120
    assert outcome.flags["case"] == "almost simple"


def test_almost_simple_step_delegates(monkeypatch):
    calls = []

    def refuse(group, settings=None, socle=None):
        calls.append(socle.order)
        return None

    monkeypatch.setattr("twoclosure.nonaffine.almost_simple_closure", refuse)
    outcome = run_nonaffine(zoo_johnson_pairs(5).group)
    assert calls == [60]
    assert not outcome.succeeded
    assert outcome.reason == "socle is not simple"


def test_johnson_six():
    outcome = run_nonaffine(zoo_johnson_pairs(6).group)
    assert outcome.order == 720


def test_affine_group_fails():
    outcome = run_nonaffine(zoo_paley(13).group)
    assert not outcome.succeeded
    assert outcome.reason == "affine group"


@pytest.mark.slow
def test_johnson_seven():
    outcome = run_nonaffine(zoo_johnson_pairs(7).group)
    assert outcome.order == 5040
