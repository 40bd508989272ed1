import itertools

import hypothesis.strategies as st
import pytest
from hypothesis import given

from cfiforge.errors import StructuralError, ValidationError
from cfiforge.f2 import (
    F2Matrix,
    F2Subspace,
    F2Vector,
    image,
    kernel_bits,
    matvec_bits,
    parity,
    rank_bits,
    rref_bits,
    solve,
    solve_bits,
)

from conftest import matrices, span_bruteforce, subspace_pairs


def kernel_bruteforce(rows, n):
    return {x for x in range(1 << n) if all(parity(r & x) == 0 for r in rows)}


def test_rank_of_small_examples():
    assert rank_bits([0b011, 0b110, 0b101]) == 2
    assert rank_bits([0b001, 0b010, 0b100]) == 3
    assert rank_bits([]) == 0
    assert rank_bits([0, 0]) == 0


def test_rref_is_reduced():
    basis, pivots = rref_bits([0b1101, 0b0111, 0b1010])
    for b, p in zip(basis, pivots):
        assert b & p
        assert sum(1 for c in basis if c & p) == 1
    assert pivots == sorted(pivots)


def test_kernel_of_even_weight_constraint():
    # the all-ones functional on three bits has the even-weight kernel
    ker = kernel_bits([0b111], 3)
    assert span_bruteforce(ker, 3) == {0b000, 0b011, 0b101, 0b110}


def test_solve_inconsistent_system():
    assert solve_bits([0b11, 0b11], 0b01, 2) is None


@given(matrices())
def test_rank_counts_the_span(m):
    assert 1 << m.rank() == len(span_bruteforce(m.rows, len(m.col_labels)))


@given(matrices())
def test_kernel_matches_bruteforce(m):
    n = len(m.col_labels)
    ker = kernel_bits(m.rows, n)
    assert span_bruteforce(ker, n) == kernel_bruteforce(m.rows, n)
    assert len(ker) == n - m.rank()
    assert m.kernel().elements_bits and set(m.kernel().elements_bits()) == kernel_bruteforce(m.rows, n)


@given(matrices(), st.integers(0, 63))
def test_solve_agrees_with_exhaustive_search(m, rhs_seed):
    n = len(m.col_labels)
    rhs = rhs_seed & ((1 << len(m.rows)) - 1)
    x = solve_bits(m.rows, rhs, n)
    solvable = any(matvec_bits(m.rows, y) == rhs for y in range(1 << n))
    assert (x is not None) == solvable
    if x is not None:
        assert matvec_bits(m.rows, x) == rhs


@given(matrices(max_rows=4, max_cols=4), st.data())
def test_matmul_is_composition(a, data):
    k = data.draw(st.integers(1, 4))
    b_rows = data.draw(st.lists(st.integers(0, (1 << k) - 1), min_size=len(a.col_labels), max_size=len(a.col_labels)))
    b = F2Matrix(a.col_labels, tuple(range(k)), tuple(b_rows))
    ab = a @ b
    for v in range(1 << k):
        vb = matvec_bits(b.rows, v)
        assert matvec_bits(ab.rows, v) == matvec_bits(a.rows, vb)


@given(matrices())
def test_transpose_is_an_involution(m):
    assert m.transpose().transpose() == m
    assert m.transpose().rank() == m.rank()


@given(subspace_pairs())
def test_intersection_and_join(pair):
    s, t = pair
    n = len(s.ambient)
    es, et = set(s.elements_bits()), set(t.elements_bits())
    assert set(s.intersect(t).elements_bits()) == es & et
    assert set(s.join(t).elements_bits()) == span_bruteforce(list(es | et), n)
    assert s.dim + t.dim == s.intersect(t).dim + s.join(t).dim


@given(subspace_pairs())
def test_orthogonal_complement(pair):
    s, _ = pair
    n = len(s.ambient)
    perp = {x for x in range(1 << n) if all(parity(x & v) == 0 for v in s.elements_bits())}
    assert set(s.orthogonal().elements_bits()) == perp
    assert s.orthogonal().orthogonal() == s
    assert s.codim() == n - s.dim


@given(subspace_pairs())
def test_equality_is_canonical(pair):
    s, _ = pair
    shuffled = F2Subspace.from_bits(s.ambient, list(reversed(list(s.elements_bits()))))
    assert shuffled == s
    assert hash(shuffled) == hash(s)


@given(matrices(max_cols=5), st.data())
def test_image_of_a_subspace(m, data):
    n = len(m.col_labels)
    gens = data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=3))
    s = F2Subspace.from_bits(m.col_labels, gens)
    rows_t = m.transpose()
    expected = {matvec_bits(m.rows, v) for v in s.elements_bits()}
    got = image(m, s)
    assert set(got.elements_bits()) == expected
    assert got.ambient == m.row_labels
    assert rows_t.shape == (n, len(m.row_labels))


def test_even_weight_subspace():
    amb = ("a", "b", "c", "d")
    ev = F2Subspace.even_weight(amb, on=("a", "b", "c"))
    # even vectors supported inside abc; d stays zero
    assert ev.dim == 2
    assert ev.contains({"a", "b"})
    assert not ev.contains({"a"})
    assert not ev.contains({"d"})
    assert F2Subspace.even_weight(amb).codim() == 1


def test_vectors_and_json_round_trip():
    m = F2Matrix.from_sets(("r", "s"), ("a", "b", "c"), [{"a", "c"}, {"b"}])
    assert m.to_lists() == [[1, 0, 1], [0, 1, 0]]
    assert F2Matrix.from_json(m.to_json()) == m
    v = F2Vector.from_set(("a", "b", "c"), {"b", "c"})
    assert (m @ v).to_list() == [1, 1]
    assert F2Vector.from_json(v.to_json()) == v
    s = F2Subspace.span(("a", "b", "c"), [{"a", "b"}, {"b", "c"}])
    assert F2Subspace.from_json(s.to_json()) == s
    assert solve(m, F2Vector.from_list(("r", "s"), [1, 1])) is not None


def test_structural_mismatch_is_rejected():
    m = F2Matrix.identity(("a", "b"))
    v = F2Vector.from_set(("a", "c"), {"a"})
    with pytest.raises(StructuralError):
        m @ v
    with pytest.raises(ValidationError):
        F2Matrix(("r",), ("a",), (0b10,))
    with pytest.raises(ValidationError):
        F2Matrix(("r", "r"), ("a",), (0, 1))


def test_identity_and_zero():
    labels = tuple(range(4))
    assert F2Matrix.identity(labels).rank() == 4
    assert F2Matrix.zeros(labels, labels).kernel() == F2Subspace.full(labels)
    assert F2Subspace.zero(labels).dim == 0
    for bits in itertools.product((0, 1), repeat=2):
        assert F2Subspace.full(labels).contains_bits(bits[0] | bits[1] << 1)
