import hypothesis.strategies as st
import networkx as nx
import pytest
from hypothesis import given
from networkx.algorithms.isomorphism import GraphMatcher

from cfiforge.errors import ParameterError, ValidationError
from cfiforge.graphs import (
    BaseGraph,
    BasePerm,
    bitflip_of_hypercube,
    canonical_edge,
    close_base_perms,
    complete_graph,
    cycle_graph,
    cycle_space,
    edge_action,
    graph_automorphisms,
    hypercube,
    hypercube_symmetry_generators,
    induced_edge_perm,
    make_graph,
    odd_degree_vertices,
    parse_base,
    path_graph,
    position_perm_of_hypercube,
)


def to_nx(g: BaseGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


@st.composite
def connected_graphs(draw, max_vertices=7):
    n = draw(st.integers(2, max_vertices))
    # random spanning tree plus extra edges keeps the graph connected
    edges = set()
    for v in range(1, n):
        edges.add((draw(st.integers(0, v - 1)), v))  # parent index < v
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    edges |= {(min(u, v), max(u, v)) for u, v in extra if u != v}
    return make_graph(range(n), edges)


@pytest.mark.parametrize("n", range(1, 6))
def test_hypercube_shape(n):
    g = hypercube(n)
    assert len(g.vertices) == 2**n
    assert len(g.edges) == n * 2 ** (n - 1)
    assert all(g.degree(v) == n for v in g.vertices)
    assert nx.is_isomorphic(to_nx(g), nx.hypercube_graph(n))


def test_small_families():
    assert len(path_graph(6).edges) == 6
    assert len(cycle_graph(6).edges) == 6
    assert len(complete_graph(4).edges) == 6
    assert parse_base("cycle:5") == cycle_graph(5)
    with pytest.raises(ParameterError):
        parse_base("wheel:5")


def test_rejects_malformed_graphs():
    with pytest.raises(ValidationError):
        make_graph([0, 1, 2], [(0, 1)])
    with pytest.raises(ValidationError):
        make_graph([0, 1], [(0, 0)])
    with pytest.raises(ValidationError):
        make_graph([0, 1], [(0, 1), (1, 0)])


def test_canonical_edge_orders_endpoints():
    assert canonical_edge("01", "00") == ("00", "01")
    assert canonical_edge(3, 1) == (1, 3)


@given(connected_graphs())
def test_cycle_space_dimension_and_evenness(g):
    cyc = cycle_space(g)
    assert cyc.dim == len(g.edges) - len(g.vertices) + 1
    assert cyc.dim == len(nx.cycle_basis(to_nx(g)))
    for bits in cyc.elements_bits():
        assert odd_degree_vertices(g, bits) == frozenset()


@given(connected_graphs(max_vertices=6))
def test_automorphism_count_matches_networkx(g):
    ours = graph_automorphisms(g)
    theirs = sum(1 for _ in GraphMatcher(to_nx(g), to_nx(g)).isomorphisms_iter())
    assert len(ours) == theirs
    assert ours[0] == BasePerm.identity(g.vertices)
    assert all(p.is_automorphism(g) for p in ours)


@pytest.mark.parametrize("g, order", [(cycle_graph(6), 12), (path_graph(6), 2), (hypercube(3), 48)])
def test_known_automorphism_counts(g, order):
    assert len(graph_automorphisms(g)) == order


def test_hypercube_generators_close_to_full_group():
    gens = hypercube_symmetry_generators(3, translations=True)
    assert len(close_base_perms(gens, hypercube(3).vertices)) == 48
    assert len(close_base_perms(hypercube_symmetry_generators(3), hypercube(3).vertices)) == 6


def test_position_action_moves_characters():
    # coordinate 0 goes to position 2
    pi = position_perm_of_hypercube(3, [2, 0, 1])
    assert pi("100") == "001"
    assert pi.is_automorphism(hypercube(3))
    flip = bitflip_of_hypercube(3, 2)
    assert flip("000") == "010"


def test_induced_edge_perm_is_a_permutation():
    g = hypercube(3)
    for pi in graph_automorphisms(g)[:10]:
        perm = induced_edge_perm(pi, g)
        assert sorted(perm) == list(range(len(g.edges)))
        for i, e in enumerate(g.edges):
            assert g.edges[perm[i]] == edge_action(pi, e)


def test_edge_action_rejects_non_automorphisms():
    g = path_graph(2)
    bad = BasePerm.from_mapping({0: 1, 1: 0, 2: 2})
    with pytest.raises(ValidationError):
        edge_action(bad, (0, 1), g)


def test_compose_and_inverse():
    g = cycle_graph(5)
    auts = graph_automorphisms(g)
    for a in auts[:4]:
        assert a.compose(a.inverse()) == BasePerm.identity(g.vertices)
        for b in auts[:4]:
            assert a.compose(b) in auts


def test_json_round_trip():
    g = hypercube(2)
    assert BaseGraph.from_json(g.to_json()) == g
    assert "--" in g.to_dot()
