import itertools
import math

import hypothesis.strategies as st
import pytest
from hypothesis import given

from cfiforge.errors import ParameterError, ValidationError
from cfiforge.f2 import F2Matrix, F2Subspace
from cfiforge.graphs import cycle_graph, graph_automorphisms, hypercube, path_graph
from cfiforge.hfs import atom, hfset, max_orb_E, min_cfi_support, parity_set, stab_E
from cfiforge.genconstruct import (
    build_gadget_matrices,
    build_generalized_circuit,
    component_of,
    counterexample_space,
    decompose_stab,
    joint_stabilizer_index,
    kernel_matrix,
    paired_parity_example,
    permute_bits,
    symmetric_basis,
    symmetric_closure,
    symmetry_failures,
)
from cfiforge.perm import PermGroup
from cfiforge.suites import generalized_matches, paired_example_checks
from cfiforge.xorcircuit import fan_in_dim

from conftest import subspace_pairs

ABC = ("e", "f", "g")


def sub(ambient, *sets):
    return F2Subspace.from_bits(ambient, [sum(1 << ambient.index(x) for x in s) for s in sets])


def mixed_sets(g):
    """Random nestings of parity sets and atoms over g's edges; most are not CFI-symmetric."""
    edge = st.sampled_from(g.edges)
    leaf = st.one_of(
        st.builds(atom, edge, st.integers(0, 1)),
        st.lists(edge, min_size=1, max_size=3, unique=True).map(lambda b: parity_set(b)[0]),
    )
    return st.recursive(leaf, lambda kids: st.frozensets(kids, min_size=1, max_size=2).map(hfset), max_leaves=5)


# linear algebra ----------------------------------------------------------------------------


def test_kernel_matrix_examples():
    amb = ("a", "b")
    full = F2Subspace.full(amb)
    assert kernel_matrix(full, full).shape == (0, 2)
    even = F2Subspace.even_weight(amb, amb)
    n = kernel_matrix(even, full)
    assert n.to_lists() == [[1, 1]]
    zero = F2Subspace.from_bits(amb, [])
    n = kernel_matrix(zero, full)
    assert n.shape == (2, 2) and n.kernel() == zero


@given(subspace_pairs())
def test_kernel_matrix_property(pair):
    gamma, other = pair
    delta = gamma.join(other)
    n = kernel_matrix(gamma, delta)
    assert n.kernel().intersect(delta) == gamma
    assert n.shape[0] == delta.dim - gamma.dim


def test_kernel_matrix_requires_containment():
    amb = ("a", "b")
    with pytest.raises(ValidationError):
        kernel_matrix(F2Subspace.full(amb), sub(amb, "a"))


def test_symmetric_closure_examples():
    cols = ("a", "b")
    n = F2Matrix.from_lists((0,), cols, [[1, 0]])
    assert symmetric_closure(n, []).rows == n.rows
    swap = {"a": "b", "b": "a"}
    assert sorted(symmetric_closure(n, [swap]).to_lists()) == [[0, 1], [1, 0]]
    cols3 = ("a", "b", "c")
    n3 = F2Matrix.from_lists((0,), cols3, [[1, 1, 0]])
    sym3 = [{"a": "b", "b": "a", "c": "c"}, {"a": "b", "b": "c", "c": "a"}]
    closed = symmetric_closure(n3, sym3)
    assert closed.shape == (3, 3)
    brute = [v for v in range(8) if all(bin(v & r).count("1") % 2 == 0 for r in (0b011, 0b101, 0b110))]
    assert sorted(closed.kernel().elements_bits()) == brute


def test_permute_bits():
    assert permute_bits(0b011, (2, 0, 1)) == 0b101


# decomposition and symmetric bases ---------------------------------------------------------


def test_decompose_examples():
    assert decompose_stab(sub(ABC, "f", "g")) == (frozenset("fg"), frozenset("e"))
    assert decompose_stab(F2Subspace.even_weight(ABC, ABC)) == (frozenset(), frozenset(ABC))
    gamma4, _, _ = counterexample_space(4)
    assert decompose_stab(gamma4) is None


def test_symmetric_basis_examples():
    gamma = sub(ABC, "e", "fg")
    grp = PermGroup.from_cycles(ABC, ["(f g)"])
    pair = symmetric_basis(gamma, grp)
    assert set(pair.basis_gamma) == {frozenset("e"), frozenset("fg")}
    assert set(pair.basis) - set(pair.basis_gamma) == {frozenset("f")}
    assert pair.stab_index <= len(ABC)
    with pytest.raises(ValidationError):
        symmetric_basis(F2Subspace.full(ABC), grp)


def test_symmetric_basis_requires_invariance():
    gamma = sub(ABC, "e", "fg")
    with pytest.raises(ValidationError):
        symmetric_basis(gamma, PermGroup.symmetric(ABC))


def test_symmetric_basis_top_component():
    mu = parity_set(["g", "f", "e"])[0]
    gamma = stab_E(mu, ABC)
    pair = symmetric_basis(gamma, PermGroup.symmetric(ABC))
    assert pair.stab_index == 3


@given(st.integers(1, 5), st.integers(1, 4))
def test_symmetric_basis_index_bound(a, b):
    amb = tuple(f"x{i}" for i in range(a + b))
    b_part = amb[a:]
    gamma = F2Subspace.from_bits(amb, [1 << i for i in range(a)] + list(F2Subspace.even_weight(amb, b_part).basis))
    grp = PermGroup.from_elements(
        amb, [tuple(range(a)) + tuple(a + j for j in p) for p in itertools.permutations(range(b))]
    )
    pair = symmetric_basis(gamma, grp)
    assert pair.stab_index <= len(amb)
    assert F2Subspace.from_bits(amb, [sum(1 << amb.index(x) for x in v) for v in pair.basis]).dim == len(amb)
    assert joint_stabilizer_index(grp, pair.basis_gamma, pair.basis) == pair.stab_index


# counterexample spaces ---------------------------------------------------------------------


def test_counterexample_small():
    gamma, grp, rep = counterexample_space(4)
    assert rep.parts == ((1, 2), (3, 4))
    assert (rep.dim, rep.codim, rep.group_order) == (2, 2, 8)
    assert grp.order() == 8
    assert rep.invariant
    assert rep.min_index == 4 and rep.min_index >= 2
    assert rep.pairs_checked == 144


@pytest.mark.parametrize("n, size, parts, codim, order", [(8, 12, 3, 3, 82944), (16, 16, 4, 4, 24**4 * 24)])
def test_counterexample_larger(n, size, parts, codim, order):
    gamma, grp, rep = counterexample_space(n)
    assert rep.size == size and len(rep.parts) == parts
    assert rep.codim == codim and rep.group_order == order
    assert rep.invariant and rep.min_index is None


def test_counterexample_range():
    with pytest.raises(ParameterError):
        counterexample_space(3)


# generalized circuits ----------------------------------------------------------------------


def test_generalized_matches_quotient_on_square():
    g = hypercube(2)
    auts = graph_automorphisms(g)
    for k in range(1, 5):
        for b in itertools.combinations(g.edges, k):
            ok, detail = generalized_matches(g, parity_set(list(b))[0], auts)
            assert ok, detail


def test_generalized_on_three_edge_parity_set():
    g = path_graph(4)
    mu = parity_set(list(g.edges))[0]
    gc = build_generalized_circuit(mu, g, graph_automorphisms(g))
    assert gc.circuit.sensitivity(gc.circuit.root) == set(g.edges)


def test_generalized_on_atom():
    g = path_graph(3)
    gc = build_generalized_circuit(atom(g.edges[0], 0), g)
    assert gc.circuit.size() == 1


def test_paired_example():
    info = paired_example_checks()
    assert not info["symmetric"]
    assert info["gates"] == 7
    assert info["component_kernels"]
    g = path_graph(3)
    assert info["root_sensitivity"] == set(g.edges[1:])
    assert info["fan_in_dim"] == 2
    assert len(info["support"]) == 3
    assert info["bound_holds"]


def test_paired_example_rejects_overlap():
    with pytest.raises(ParameterError):
        paired_parity_example([(0, 1)], (0, 1))


def test_paired_example_component_needs_two_rows():
    g = path_graph(3)
    mu = paired_parity_example(g.edges[1:], g.edges[0])
    gm = build_gadget_matrices(mu, g, graph_automorphisms(g))
    inner = next(c for c, rep in enumerate(gm.reps) if rep in mu)
    top = next(c for c, rep in enumerate(gm.reps) if rep is mu)
    assert gm.n[(top, inner)].shape[0] == 2
    assert component_of(gm, top, inner) is mu


@given(st.data())
def test_generalized_invariants_on_mixed_sets(data):
    g = data.draw(st.sampled_from([path_graph(4), cycle_graph(4)]))
    mu = data.draw(mixed_sets(g))
    if not min_cfi_support(mu):
        return
    auts = graph_automorphisms(g)
    gc = build_generalized_circuit(mu, g, auts)
    gm = gc.matrices
    for c, rep in enumerate(gm.reps):
        assert gm.m[c].kernel() == stab_E(rep, g)
    for (cx, cy), n in gm.n.items():
        assert (n @ gm.m[cy]).kernel() == stab_E(component_of(gm, cx, cy), g)
    labels = [lab for rows in gm.rows_of.values() for lab in rows]
    assert len(labels) == len(set(labels))
    assert symmetry_failures(gc) == []
    orb = max_orb_E(mu)
    assert 2 ** fan_in_dim(gc.circuit) <= orb
    root = gc.circuit.sensitivity(gc.circuit.root)
    assert root <= min_cfi_support(mu)
    assert len(root) * math.log2(orb) >= len(min_cfi_support(mu))


def test_generalized_rejects_empty_set():
    with pytest.raises(ValidationError):
        build_generalized_circuit(hfset([]))
