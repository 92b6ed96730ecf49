import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqaoa.classical import exact_min_vertex_cover
from cqaoa.exceptions import EdgeListError
from cqaoa.graph import (
    Graph,
    gen_cycle,
    gen_erdos_renyi,
    gen_johnson,
    gen_star,
    johnson_subsets,
    read_edge_list,
    write_edge_list,
)

from oracles import johnson_brute


def assert_simple(g):
    for u, v in g.edges:
        assert 0 <= u < v < g.n_vertices


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        Graph(3, frozenset({(0, 3)}))
    with pytest.raises(ValueError):
        Graph(0)


def test_graph_normalises_orientation():
    g = Graph(3, frozenset({(2, 0), (0, 2)}))
    assert g.edges == {(0, 2)}


@pytest.mark.parametrize("prob, expected", [(0.0, 0), (1.0, 6)])
def test_erdos_renyi_extremes(prob, expected):
    for seed in range(5):
        assert gen_erdos_renyi(4, prob, seed).n_edges == expected


def test_erdos_renyi_mean_edge_count():
    counts = [gen_erdos_renyi(5, 0.5, seed).n_edges for seed in range(10000)]
    assert abs(np.mean(counts) - 5.0) <= 0.2


def test_erdos_renyi_reproducible_and_validated():
    assert gen_erdos_renyi(9, 0.3, 11) == gen_erdos_renyi(9, 0.3, 11)
    assert gen_erdos_renyi(9, 0.3, 11) != gen_erdos_renyi(9, 0.3, 12)
    for bad in (-0.1, 1.5):
        with pytest.raises(ValueError):
            gen_erdos_renyi(4, bad, 0)


def test_erdos_renyi_edge_membership_is_monotone_in_prob():
    # membership uses one uniform per edge index, so raising prob only adds edges
    low = gen_erdos_renyi(10, 0.3, 5)
    high = gen_erdos_renyi(10, 0.6, 5)
    assert low.edges <= high.edges


def test_cycle():
    assert gen_cycle(3).edges == {(0, 1), (1, 2), (0, 2)}
    g = gen_cycle(4)
    assert g.n_edges == 4 and set(g.degrees()) == {2}
    assert exact_min_vertex_cover(gen_cycle(6)).size == 3
    with pytest.raises(ValueError):
        gen_cycle(2)


def test_star():
    assert gen_star(2).edges == {(0, 1)}
    g = gen_star(5)
    assert g.n_edges == 4
    assert list(g.degrees()) == [4, 1, 1, 1, 1]
    assert exact_min_vertex_cover(gen_star(10)).cover == {0}
    with pytest.raises(ValueError):
        gen_star(1)


def test_johnson_complete_case():
    g = gen_johnson(6, 1)
    assert g.n_vertices == 6 and g.n_edges == 15


@pytest.mark.parametrize("n, k", [(6, 2), (6, 3), (5, 2), (4, 1)])
def test_johnson_matches_subset_definition(n, k):
    size, degrees = johnson_brute(n, k)
    g = gen_johnson(n, k)
    assert g.n_vertices == size
    assert sorted(g.degrees()) == sorted(degrees)
    assert set(g.degrees()) == {k * (n - k)}


def test_johnson_colex_order():
    assert johnson_subsets(4, 2) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]


@pytest.mark.parametrize("n, k", [(6, 1), (6, 2), (7, 3), (5, 4)])
def test_johnson_complement_invariants(n, k):
    a, b = gen_johnson(n, k), gen_johnson(n, n - k)
    assert a.n_edges == b.n_edges
    assert sorted(a.degrees()) == sorted(b.degrees())


def test_johnson_rejects_bad_k():
    for k in (0, 7):
        with pytest.raises(ValueError):
            gen_johnson(6, k)


def test_edge_list_examples():
    assert read_edge_list("3\n0 1\n1 2\n") == Graph(3, frozenset({(0, 1), (1, 2)}))
    assert write_edge_list(gen_cycle(3)) == "3\n0 1\n0 2\n1 2\n"


@pytest.mark.parametrize(
    "text, line",
    [("3\n0 0\n", 2), ("3\n0 1\n0 5\n", 3), ("3\n0 x\n", 2), ("-3\n", 1), ("", 1), ("2\n0 1 1\n", 2)],
)
def test_edge_list_errors_name_the_line(text, line):
    with pytest.raises(EdgeListError) as err:
        read_edge_list(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, frozenset(chosen))


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_edge_list_round_trip(g):
    assert_simple(g)
    assert read_edge_list(write_edge_list(g)) == g


@pytest.mark.parametrize("g", [gen_cycle(7), gen_star(6), gen_johnson(5, 2), gen_erdos_renyi(8, 0.5, 3)])
def test_generators_produce_simple_graphs(g):
    assert_simple(g)
