"""Exact linear algebra over GF(2) with label-indexed rows and columns.

Vectors are packed into Python ints: bit ``i`` holds the entry at the
``i``-th label of the index sequence. Reduced row-echelon form uses the
lowest set bit of a row as its pivot, so pivots follow the label order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import StructuralError, ValidationError
from .labels import from_jsonable, to_jsonable

Label = Hashable


# ---------------------------------------------------------------------------
# int-bitset kernels
# ---------------------------------------------------------------------------


def parity(x: int) -> int:
    return x.bit_count() & 1


def rref_bits(rows: Iterable[int]) -> tuple[list[int], list[int]]:
    """Reduced row-echelon form of packed rows.

    Returns the nonzero reduced rows sorted by pivot and their pivot bits.
    """
    basis: list[int] = []
    pivots: list[int] = []
    for r in rows:
        for b, p in zip(basis, pivots):
            if r & p:
                r ^= b
        if not r:
            continue
        p = r & -r
        for i, b in enumerate(basis):
            if b & p:
                basis[i] = b ^ r
        basis.append(r)
        pivots.append(p)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return [basis[i] for i in order], [pivots[i] for i in order]


def rank_bits(rows: Iterable[int]) -> int:
    return len(rref_bits(rows)[0])


def kernel_bits(rows: Iterable[int], ncols: int) -> list[int]:
    """Basis of {x : r·x = 0 for every row r}, one vector per free column."""
    basis, pivots = rref_bits(rows)
    pivot_mask = 0
    for p in pivots:
        pivot_mask |= p
    out = []
    for c in range(ncols):
        f = 1 << c
        if pivot_mask & f:
            continue
        v = f
        for b, p in zip(basis, pivots):
            if b & f:
                v |= p
        out.append(v)
    return out


def solve_bits(rows: Sequence[int], rhs: int, ncols: int) -> int | None:
    """Solve A·x = b with free variables set to zero.

    ``rows[i]`` is equation ``i``; bit ``i`` of ``rhs`` is its right-hand side.
    """
    aug = [(r, (rhs >> i) & 1) for i, r in enumerate(rows)]
    basis: list[tuple[int, int]] = []
    for r, t in aug:
        for b, bt in basis:
            p = b & -b
            if r & p:
                r ^= b
                t ^= bt
        if not r:
            if t:
                return None
            continue
        p = r & -r
        basis = [((b ^ r, bt ^ t) if b & p else (b, bt)) for b, bt in basis]
        basis.append((r, t))
    x = 0
    for b, t in basis:
        if t:
            x |= b & -b
    return x


def matvec_bits(rows: Sequence[int], v: int) -> int:
    out = 0
    for i, r in enumerate(rows):
        if parity(r & v):
            out |= 1 << i
    return out


@lru_cache(maxsize=4096)
def _check_labels(labels: tuple) -> None:
    if len(set(labels)) != len(labels):
        raise ValidationError("labels in an index sequence must be distinct")


def _index(labels: tuple) -> dict:
    return _index_cached(labels)


@lru_cache(maxsize=4096)
def _index_cached(labels: tuple) -> dict:
    return {lab: i for i, lab in enumerate(labels)}


def bits_from_labels(labels: tuple, chosen: Iterable[Label]) -> int:
    idx = _index(labels)
    v = 0
    for lab in chosen:
        try:
            v |= 1 << idx[lab]
        except KeyError:
            raise StructuralError(f"label {lab!r} is not in the index set") from None
    return v


def labels_from_bits(labels: tuple, bits: int) -> list:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(labels[i])
        bits >>= 1
        i += 1
    return out


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class F2Vector:
    labels: tuple
    bits: int = 0

    def __post_init__(self) -> None:
        _check_labels(self.labels)
        if self.bits >> len(self.labels):
            raise ValidationError("vector has bits beyond its index set")

    @classmethod
    def from_set(cls, labels: Sequence[Label], chosen: Iterable[Label]) -> "F2Vector":
        labels = tuple(labels)
        return cls(labels, bits_from_labels(labels, chosen))

    @classmethod
    def from_list(cls, labels: Sequence[Label], entries: Sequence[int]) -> "F2Vector":
        v = 0
        for i, x in enumerate(entries):
            if x & 1:
                v |= 1 << i
        return cls(tuple(labels), v)

    def __add__(self, other: "F2Vector") -> "F2Vector":
        _same(self.labels, other.labels)
        return F2Vector(self.labels, self.bits ^ other.bits)

    def __getitem__(self, label: Label) -> int:
        return (self.bits >> _index(self.labels)[label]) & 1

    def support(self) -> frozenset:
        return frozenset(labels_from_bits(self.labels, self.bits))

    def weight(self) -> int:
        return self.bits.bit_count()

    def dot(self, other: "F2Vector") -> int:
        _same(self.labels, other.labels)
        return parity(self.bits & other.bits)

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(len(self.labels))]

    def to_json(self) -> dict:
        return {"labels": [to_jsonable(x) for x in self.labels], "bits": self.to_list()}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "F2Vector":
        return cls.from_list([from_jsonable(x) for x in obj["labels"]], obj["bits"])


def _same(a: tuple, b: tuple) -> None:
    if a != b:
        raise StructuralError("index sets do not match")


@dataclass(frozen=True)
class F2Matrix:
    row_labels: tuple
    col_labels: tuple
    rows: tuple = field(default=())

    def __post_init__(self) -> None:
        _check_labels(self.row_labels)
        _check_labels(self.col_labels)
        if len(self.rows) != len(self.row_labels):
            raise ValidationError("row count does not match row labels")
        limit = 1 << len(self.col_labels)
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValidationError("row has bits beyond the column index set")

    # construction ---------------------------------------------------------

    @classmethod
    def from_sets(
        cls, row_labels: Sequence[Label], col_labels: Sequence[Label], sets: Iterable[Iterable[Label]]
    ) -> "F2Matrix":
        cols = tuple(col_labels)
        return cls(tuple(row_labels), cols, tuple(bits_from_labels(cols, s) for s in sets))

    @classmethod
    def from_lists(
        cls, row_labels: Sequence[Label], col_labels: Sequence[Label], entries: Sequence[Sequence[int]]
    ) -> "F2Matrix":
        rows = []
        for line in entries:
            v = 0
            for i, x in enumerate(line):
                if x & 1:
                    v |= 1 << i
            rows.append(v)
        return cls(tuple(row_labels), tuple(col_labels), tuple(rows))

    @classmethod
    def identity(cls, labels: Sequence[Label]) -> "F2Matrix":
        labels = tuple(labels)
        return cls(labels, labels, tuple(1 << i for i in range(len(labels))))

    @classmethod
    def zeros(cls, row_labels: Sequence[Label], col_labels: Sequence[Label]) -> "F2Matrix":
        return cls(tuple(row_labels), tuple(col_labels), (0,) * len(row_labels))

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def entry(self, row: Label, col: Label) -> int:
        r = self.rows[_index(self.row_labels)[row]]
        return (r >> _index(self.col_labels)[col]) & 1

    def row(self, label: Label) -> F2Vector:
        return F2Vector(self.col_labels, self.rows[_index(self.row_labels)[label]])

    def row_vectors(self) -> list[F2Vector]:
        return [F2Vector(self.col_labels, r) for r in self.rows]

    def row_sets(self) -> list[frozenset]:
        return [frozenset(labels_from_bits(self.col_labels, r)) for r in self.rows]

    def to_lists(self) -> list[list[int]]:
        n = len(self.col_labels)
        return [[(r >> i) & 1 for i in range(n)] for r in self.rows]

    # algebra --------------------------------------------------------------

    def __matmul__(self, other: "F2Matrix | F2Vector") -> "F2Matrix | F2Vector":
        if isinstance(other, F2Vector):
            _same(self.col_labels, other.labels)
            return F2Vector(self.row_labels, matvec_bits(self.rows, other.bits))
        _same(self.col_labels, other.row_labels)
        out = []
        for r in self.rows:
            acc = 0
            i = 0
            while r:
                if r & 1:
                    acc ^= other.rows[i]
                r >>= 1
                i += 1
            out.append(acc)
        return F2Matrix(self.row_labels, other.col_labels, tuple(out))

    def transpose(self) -> "F2Matrix":
        cols = []
        for j in range(len(self.col_labels)):
            m = 1 << j
            v = 0
            for i, r in enumerate(self.rows):
                if r & m:
                    v |= 1 << i
            cols.append(v)
        return F2Matrix(self.col_labels, self.row_labels, tuple(cols))

    def vstack(self, other: "F2Matrix") -> "F2Matrix":
        _same(self.col_labels, other.col_labels)
        return F2Matrix(self.row_labels + other.row_labels, self.col_labels, self.rows + other.rows)

    def permute_columns(self, mapping: Mapping[Label, Label], new_cols: Sequence[Label] | None = None) -> "F2Matrix":
        """Move column ``c`` to ``mapping[c]``; entries keep their rows."""
        cols = tuple(new_cols) if new_cols is not None else self.col_labels
        idx = _index(cols)
        perm = [idx[mapping[c]] for c in self.col_labels]
        out = []
        for r in self.rows:
            v = 0
            i = 0
            while r:
                if r & 1:
                    v |= 1 << perm[i]
                r >>= 1
                i += 1
            out.append(v)
        return F2Matrix(self.row_labels, cols, tuple(out))

    def rank(self) -> int:
        return rank_bits(self.rows)

    def kernel(self) -> "F2Subspace":
        return F2Subspace.from_bits(self.col_labels, kernel_bits(self.rows, len(self.col_labels)))

    def row_space(self) -> "F2Subspace":
        return F2Subspace.from_bits(self.col_labels, self.rows)

    def column_space(self) -> "F2Subspace":
        return self.transpose().row_space()

    # io -------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": [to_jsonable(x) for x in self.row_labels],
            "cols": [to_jsonable(x) for x in self.col_labels],
            "bits": [b for line in self.to_lists() for b in line],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "F2Matrix":
        rows = [from_jsonable(x) for x in obj["rows"]]
        cols = [from_jsonable(x) for x in obj["cols"]]
        flat = list(obj["bits"])
        n = len(cols)
        if len(flat) != len(rows) * n:
            raise ValidationError("bit count does not match the matrix shape")
        return cls.from_lists(rows, cols, [flat[i * n:(i + 1) * n] for i in range(len(rows))])


@dataclass(frozen=True)
class F2Subspace:
    """A subspace of F2^ambient, stored as its canonical reduced-echelon basis."""

    ambient: tuple
    basis: tuple = ()

    def __post_init__(self) -> None:
        _check_labels(self.ambient)
        canon, _ = rref_bits(self.basis)
        if tuple(canon) != self.basis:
            raise ValidationError("basis is not in canonical reduced-echelon form; use from_bits")

    @classmethod
    def from_bits(cls, ambient: Sequence[Label], vectors: Iterable[int]) -> "F2Subspace":
        return cls(tuple(ambient), tuple(rref_bits(vectors)[0]))

    @classmethod
    def span(cls, ambient: Sequence[Label], vectors: Iterable[F2Vector | Iterable[Label]]) -> "F2Subspace":
        ambient = tuple(ambient)
        bits = []
        for v in vectors:
            if isinstance(v, F2Vector):
                _same(ambient, v.labels)
                bits.append(v.bits)
            else:
                bits.append(bits_from_labels(ambient, v))
        return cls.from_bits(ambient, bits)

    @classmethod
    def full(cls, ambient: Sequence[Label]) -> "F2Subspace":
        ambient = tuple(ambient)
        return cls(ambient, tuple(1 << i for i in range(len(ambient))))

    @classmethod
    def zero(cls, ambient: Sequence[Label]) -> "F2Subspace":
        return cls(tuple(ambient), ())

    @classmethod
    def even_weight(cls, ambient: Sequence[Label], on: Iterable[Label] | None = None) -> "F2Subspace":
        """Even-weight vectors supported on ``on`` (default: the whole ambient)."""
        ambient = tuple(ambient)
        idx = _index(ambient)
        coords = sorted(idx[x] for x in (ambient if on is None else on))
        vecs = [(1 << coords[0]) | (1 << c) for c in coords[1:]] if coords else []
        return cls.from_bits(ambient, vecs)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[F2Vector]:
        return [F2Vector(self.ambient, b) for b in self.basis]

    def basis_sets(self) -> list[frozenset]:
        return [frozenset(labels_from_bits(self.ambient, b)) for b in self.basis]

    def contains_bits(self, v: int) -> bool:
        for b in self.basis:
            p = b & -b
            if v & p:
                v ^= b
        return v == 0

    def contains(self, v: F2Vector | Iterable[Label]) -> bool:
        if isinstance(v, F2Vector):
            _same(self.ambient, v.labels)
            return self.contains_bits(v.bits)
        return self.contains_bits(bits_from_labels(self.ambient, v))

    def __contains__(self, v: F2Vector | Iterable[Label]) -> bool:
        return self.contains(v)

    def is_subspace_of(self, other: "F2Subspace") -> bool:
        _same(self.ambient, other.ambient)
        return all(other.contains_bits(b) for b in self.basis)

    def annihilator_bits(self) -> list[int]:
        """Basis of the orthogonal complement under the standard dot product."""
        return kernel_bits(self.basis, len(self.ambient))

    def orthogonal(self) -> "F2Subspace":
        return F2Subspace.from_bits(self.ambient, self.annihilator_bits())

    def intersect(self, other: "F2Subspace") -> "F2Subspace":
        _same(self.ambient, other.ambient)
        constraints = self.annihilator_bits() + other.annihilator_bits()
        return F2Subspace.from_bits(self.ambient, kernel_bits(constraints, len(self.ambient)))

    def join(self, other: "F2Subspace") -> "F2Subspace":
        _same(self.ambient, other.ambient)
        return F2Subspace.from_bits(self.ambient, self.basis + other.basis)

    def codim(self) -> int:
        return len(self.ambient) - self.dim

    def elements_bits(self) -> Iterator[int]:
        """All 2^dim members, in Gray-code order starting from zero."""
        v = 0
        yield v
        for i in range(1, 1 << self.dim):
            j = (i & -i).bit_length() - 1
            v ^= self.basis[j]
            yield v

    def reorder(self, ambient: Sequence[Label]) -> "F2Subspace":
        """The same subspace expressed over a permuted ambient sequence."""
        ambient = tuple(ambient)
        if set(ambient) != set(self.ambient) or len(ambient) != len(self.ambient):
            raise StructuralError("reorder needs the same label set")
        return F2Subspace.span(ambient, (labels_from_bits(self.ambient, b) for b in self.basis))

    def to_json(self) -> dict:
        return {
            "ambient": [to_jsonable(x) for x in self.ambient],
            "basis": [[(b >> i) & 1 for i in range(len(self.ambient))] for b in self.basis],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "F2Subspace":
        ambient = [from_jsonable(x) for x in obj["ambient"]]
        vecs = []
        for line in obj["basis"]:
            v = 0
            for i, x in enumerate(line):
                if x & 1:
                    v |= 1 << i
            vecs.append(v)
        return cls.from_bits(ambient, vecs)


# ---------------------------------------------------------------------------
# operations with the documented signatures
# ---------------------------------------------------------------------------


def rank(m: F2Matrix) -> int:
    return m.rank()


def kernel(m: F2Matrix) -> F2Subspace:
    return m.kernel()


def solve(a: F2Matrix, b: F2Vector) -> F2Vector | None:
    """A solution of A·x = b with free variables zero, or None if inconsistent."""
    _same(a.row_labels, b.labels)
    x = solve_bits(a.rows, b.bits, len(a.col_labels))
    return None if x is None else F2Vector(a.col_labels, x)


def contains(s: F2Subspace, v: F2Vector) -> bool:
    return s.contains(v)


def intersect(s: F2Subspace, t: F2Subspace) -> F2Subspace:
    return s.intersect(t)


def image(m: F2Matrix, s: F2Subspace) -> F2Subspace:
    """span{M·b : b in basis(S)} as a subspace over M's row labels."""
    _same(m.col_labels, s.ambient)
    return F2Subspace.from_bits(m.row_labels, (matvec_bits(m.rows, b) for b in s.basis))


def dim(s: F2Subspace) -> int:
    return s.dim
