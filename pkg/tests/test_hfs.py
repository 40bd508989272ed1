import itertools

import hypothesis.strategies as st
import pytest
from hypothesis import given

from cfiforge.cfi import build_cfi, iter_flip_space
from cfiforge.errors import ParameterError, ResourceLimitError, ValidationError
from cfiforge.f2 import F2Subspace
from cfiforge.graphs import BasePerm, complete_graph, cycle_graph, graph_automorphisms, hypercube, path_graph
from cfiforge.genconstruct import paired_parity_example
from cfiforge.hfs import (
    act_aut,
    act_flip,
    act_perm,
    atom,
    components,
    components_after_removal,
    empty_set,
    flipped_component_count,
    from_json,
    hfset,
    is_cfi_symmetric,
    max_orb_E,
    min_aut_support,
    min_cfi_support,
    orb_cfi_bruteforce,
    orb_cfi_size,
    orb_E,
    orb_E_size,
    orb_full_aut_size,
    parity_set,
    sim_classes,
    stab_E,
    stab_E_bruteforce,
    support_report,
    tc,
    to_json,
)

EDGES = ("e", "f", "g")
e0, e1, f0, f1, g0, g1 = (atom(x, b) for x in EDGES for b in (0, 1))
MU_FG = parity_set(["g", "f"])[0]
MU_EFG = parity_set(["g", "f", "e"])[0]


def hf_sets(edges=("a", "b", "c", "d"), max_leaves=12):
    atoms = st.builds(atom, st.sampled_from(edges), st.integers(0, 1))
    return st.recursive(atoms, lambda kids: st.frozensets(kids, min_size=1, max_size=3).map(hfset), max_leaves=max_leaves)


def stab_oracle(x, ambient):
    """Every flip over ``ambient`` that fixes x."""
    fixing = []
    for r in range(len(ambient) + 1):
        for flip in itertools.combinations(ambient, r):
            if act_flip(flip, x) is x:
                fixing.append(frozenset(flip))
    return fixing


def as_flips(space: F2Subspace):
    return set(iter_flip_space(space))


# construction and identity ------------------------------------------------------------


def test_hash_consing():
    assert hfset([e0, f0]) is hfset([f0, e0, f0])
    assert hfset([e0]) is not e0
    assert atom("e", 0) is e0
    a = hfset([e0])
    assert len(tc(hfset([a, hfset([e0, f0])]))) == 5


def test_closure_sizes():
    assert tc(e0) == {e0}
    assert len(tc(MU_EFG)) == 15
    a = atom("a", 0)
    assert len(tc(hfset([hfset([a]), hfset([a, atom("b", 0)])]))) == 5


def test_parity_set_shapes():
    assert parity_set(["e"]) == (e0, e1)
    assert MU_FG is hfset([hfset([f0, g0]), hfset([f1, g1])])
    mu_tilde_fg = hfset([hfset([f1, g0]), hfset([f0, g1])])
    assert MU_EFG is hfset([hfset([MU_FG, e0]), hfset([mu_tilde_fg, e1])])
    with pytest.raises(ParameterError):
        parity_set([])
    with pytest.raises(ParameterError):
        parity_set(["e", "e"])


# flips -----------------------------------------------------------------------------------


def test_flip_examples():
    assert act_flip(["e"], hfset([e0, f0])) is hfset([e1, f0])
    assert act_flip(["f", "g"], MU_FG) is MU_FG
    assert act_flip(["f"], MU_FG) is parity_set(["g", "f"])[1]


@given(hf_sets(), st.sets(st.sampled_from("abcd")), st.sets(st.sampled_from("abcd")))
def test_flip_action_law(x, a, b):
    assert act_flip(a, act_flip(b, x)) is act_flip(set(a) ^ set(b), x)
    assert act_flip(a, act_flip(a, x)) is x


def test_perm_action_relabels_edges():
    tri = complete_graph(3)
    pi = BasePerm.from_mapping({0: 1, 1: 0, 2: 2})
    x = hfset([atom((0, 2), 0), atom((0, 1), 1)])
    assert act_perm(pi, x) is hfset([atom((1, 2), 0), atom((0, 1), 1)])
    assert act_aut(pi, [(0, 1)], x) is hfset([atom((1, 2), 0), atom((0, 1), 0)])
    assert pi.is_automorphism(tri)


# supports and stabilizers ---------------------------------------------------------------


def test_support_examples():
    assert min_cfi_support(e0) == {"e"}
    assert min_cfi_support(MU_EFG) == {"e", "f", "g"}
    assert min_cfi_support(MU_FG) == {"f", "g"}
    assert act_flip(["e"], MU_FG) is MU_FG
    assert min_cfi_support(empty_set()) == frozenset()


def test_stabilizer_examples():
    assert as_flips(stab_E(e0, ["e"])) == {frozenset()}
    assert orb_E_size(e0) == 2
    stab = stab_E(MU_FG, EDGES)
    assert as_flips(stab) == {frozenset(), frozenset("e"), frozenset("fg"), frozenset("efg")}
    assert orb_E_size(MU_FG) == 2
    pair = hfset([f0, g0])
    assert as_flips(stab_E(pair, EDGES)) == {frozenset(), frozenset("e")}
    assert orb_E_size(pair) == 4


@given(hf_sets())
def test_stabilizer_matches_bruteforce(x):
    ambient = ("a", "b", "c", "d")
    expected = set(stab_oracle(x, ambient))
    assert as_flips(stab_E(x, ambient)) == expected
    assert stab_E_bruteforce(x, ambient) == stab_E(x, ambient)
    assert orb_E_size(x) * len(expected) == 2 ** len(ambient)
    assert len(orb_E(x)) == orb_E_size(x)
    assert min_cfi_support(x) == {e for e in ambient if act_flip([e], x) is not x}


@given(hf_sets())
def test_stabilizer_constant_on_classes(x):
    ambient = ("a", "b", "c", "d")
    for cls in sim_classes(x):
        stabs = {stab_E(y, ambient) for y in cls}
        assert len(stabs) == 1


@given(hf_sets())
def test_stabilizer_is_component_intersection(x):
    ambient = ("a", "b", "c", "d")
    if x.is_atom:
        return
    acc = F2Subspace.full(ambient)
    for gamma in components(x):
        acc = acc.intersect(stab_E(hfset(gamma), ambient))
    assert acc == stab_E(x, ambient)


@given(hf_sets())
def test_max_orbit_bound(x):
    assert max_orb_E(x) <= orb_E_size(x) * len(tc(x))


def test_support_cap():
    with pytest.raises(ResourceLimitError):
        orb_E_size(hfset([atom(f"y{i}", 0) for i in range(5)]), cap=3)


# CFI orbits -------------------------------------------------------------------------------


def test_cfi_orbit_examples():
    tree = path_graph(4)
    assert orb_cfi_size(atom(tree.edges[0], 0), tree) == 1
    sq = hypercube(2)
    assert orb_cfi_size(atom(sq.edges[0], 0), sq) == 2
    tri = complete_graph(3)
    a, b, c = tri.edges
    mu = parity_set([c, b])[0]
    # the triangle's only cycle flips both support edges, an even flip, so it fixes μ
    assert orb_cfi_size(mu, tri) == 1 == orb_cfi_bruteforce(mu, tri)
    assert orb_cfi_size(atom(a, 0), tri) == 2


@given(st.data())
def test_cfi_orbit_matches_bfs(data):
    g = data.draw(st.sampled_from([hypercube(2), cycle_graph(5), complete_graph(4)]))
    x = data.draw(hf_sets(edges=g.edges, max_leaves=8))
    assert orb_cfi_size(x, g) == orb_cfi_bruteforce(x, g)


# components and symmetry ------------------------------------------------------------------


def test_component_examples():
    assert components(hfset([f0, g0])) == [frozenset({f0}), frozenset({g0})]
    assert components(MU_FG) == [frozenset(MU_FG.children)]
    assert components(hfset([e0, e1])) == [frozenset({e0, e1})]


def test_symmetry_examples():
    assert is_cfi_symmetric(MU_EFG)
    assert is_cfi_symmetric(e0)
    g = path_graph(3)
    report = is_cfi_symmetric(paired_parity_example(g.edges[1:], g.edges[0]))
    assert not report.symmetric
    assert "size 4" in report.violation.reason


def test_max_orbit_examples():
    assert max_orb_E(MU_EFG) == 4
    assert max_orb_E(e0) == 2
    assert max_orb_E(MU_FG) == 4


@pytest.mark.parametrize("k", range(1, 9))
def test_parity_sets_are_super_symmetric(k):
    edges = [f"x{i}" for i in range(k)]
    mu, tilde = parity_set(edges)
    assert is_cfi_symmetric(mu)
    assert orb_E_size(mu) == 2
    assert orb_E(mu) == sorted([mu, tilde], key=lambda y: y.key)
    assert min_cfi_support(mu) == set(edges)


@pytest.mark.parametrize("k", range(2, 6))
def test_flipped_count_constant_within_components(k):
    edges = [f"x{i}" for i in range(k)]
    mu = parity_set(edges)[0]
    flips = [c for r in range(k + 1) for c in itertools.combinations(edges, r)]
    for x in tc(mu):
        for gamma in components(x):
            for flip in flips:
                counts = {flipped_component_count(y, flip) % 2 for y in gamma}
                assert len(counts) == 1


# automorphism supports --------------------------------------------------------------------


def test_aut_support_tree_atom():
    g = path_graph(3)
    c = build_cfi(g)
    s = min_aut_support(atom(g.edges[0], 0), c, graph_automorphisms(g))
    assert s.exhaustive and s.size == 1
    assert min_aut_support(empty_set(), c, graph_automorphisms(g)).size == 0


def test_aut_support_bounded_on_square():
    g = hypercube(2)
    c = build_cfi(g)
    auts = graph_automorphisms(g)
    for e in g.edges:
        mu = parity_set([e])[0]
        s = min_aut_support(mu, c, auts)
        assert s.exhaustive
        assert s.size <= len(min_cfi_support(mu)) + len(g.vertices)


@pytest.mark.parametrize("g", [hypercube(2), cycle_graph(4), path_graph(4), complete_graph(4)], ids=str)
def test_bridge_bound(g):
    c = build_cfi(g)
    auts = graph_automorphisms(g)
    for r in range(1, len(g.edges) + 1):
        for b in itertools.islice(itertools.combinations(g.edges, r), 6):
            mu = parity_set(b)[0]
            k = components_after_removal(g, min_cfi_support(mu))
            assert orb_E_size(mu) <= 2 ** (k * k) * orb_full_aut_size(mu, c, auts)


# reports and io ----------------------------------------------------------------------------


@given(hf_sets())
def test_json_round_trip(x):
    assert from_json(to_json(x)) is x


def test_json_rejects_garbage():
    with pytest.raises(ValidationError):
        from_json({"nope": 1})


def test_support_report():
    r = support_report(MU_FG, EDGES)
    assert r.sup_cfi == {"f", "g"}
    assert r.orb_E_size == 2 and r.stab_E.dim == 2
    assert r.orb_cfi_size is None
    assert r.csv_row()[1:] == ["f;g", "2", "2", ""]
    assert r.to_json()["sup_cfi"] == ["f", "g"]
