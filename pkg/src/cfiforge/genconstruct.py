"""The generalized circuit Ĉ(μ) for sets that need not be CFI-symmetric.

Every ∼-class [x] of tc(μ) gets a matrix M[x] over the edges whose kernel is
Stab_E(x). For each component class [y] of [x] a gadget matrix N[x][y] over
the rows of M[y] repairs the missing CFI-symmetry, and M[x] stacks the
products N[x][y]·M[y]. Gates of Ĉ(μ) are the rows of the M matrices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import ConsistencyError, ParameterError, ValidationError
from .f2 import F2Matrix, F2Subspace, image, rref_bits, solve_bits
from .graphs import BaseGraph, BasePerm, edge_action
from .hfs import HfSet, act_perm, atom, hfset, parity_set, sim_classes, stab_E
from .labels import serialize, sort_labels, to_jsonable
from .perm import PermGroup, cycle_perm
from .xorcircuit import XorCircuit

RowLabel = tuple


# ---------------------------------------------------------------------------
# linear algebra building blocks
# ---------------------------------------------------------------------------


def extend_basis(sub: F2Subspace, sup: F2Subspace) -> list[int]:
    """Vectors of ``sup``'s basis that extend ``sub``'s basis to a basis of ``sup``."""
    span = list(sub.basis)
    extra = []
    rank = len(span)
    for v in sup.basis:
        if len(rref_bits(span + [v])[0]) > rank:
            span.append(v)
            extra.append(v)
            rank += 1
    return extra


def kernel_matrix(gamma: F2Subspace, delta: F2Subspace) -> F2Matrix:
    """A matrix N with dim Δ − dim Γ rows such that Ker(N) ∩ Δ = Γ.

    Row i solves the system whose equations are the basis vectors of Γ
    extended to Δ, with right-hand side 1 exactly at the i-th extension vector.
    """
    if gamma.ambient != delta.ambient:
        raise ValidationError("subspaces live in different ambient spaces")
    if not gamma.is_subspace_of(delta):
        raise ValidationError("Γ is not contained in Δ")
    ambient = gamma.ambient
    extra = extend_basis(gamma, delta)
    system = list(gamma.basis) + extra
    rows = []
    for i in range(len(extra)):
        rhs = 1 << (len(gamma.basis) + i)
        sol = solve_bits(system, rhs, len(ambient))
        if sol is None:
            raise ConsistencyError("basis system is inconsistent")
        rows.append(sol)
    n = F2Matrix(tuple(range(len(rows))), ambient, tuple(rows))
    if n.kernel().intersect(delta) != gamma:
        raise ConsistencyError("kernel matrix misses its target subspace")
    return n


def permute_bits(bits: int, positions: Sequence[int]) -> int:
    """Move entry i to position ``positions[i]``."""
    out = 0
    i = 0
    while bits:
        if bits & 1:
            out |= 1 << positions[i]
        bits >>= 1
        i += 1
    return out


def _positions(mapping: Mapping[Hashable, Hashable], source: Sequence[Hashable], target: Sequence[Hashable]) -> tuple:
    where = {lab: i for i, lab in enumerate(target)}
    return tuple(where[mapping[lab]] for lab in source)


def symmetric_closure(
    n: F2Matrix, column_perms: Iterable[Mapping[Hashable, Hashable]], within: F2Subspace | None = None
) -> F2Matrix:
    """Replace every row by its orbit under the column permutations.

    Orbits of different rows are kept as separate blocks even when they
    coincide. With ``within`` given, Ker(·) ∩ within must be unchanged.
    """
    cols = n.col_labels
    perms = [_positions(p, cols, cols) for p in column_perms]
    rows: list[int] = []
    for r in n.rows:
        seen = {r}
        frontier = [r]
        while frontier:
            nxt = []
            for v in frontier:
                for p in perms:
                    w = permute_bits(v, p)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        rows.append(r)
        rows.extend(sorted(seen - {r}))
    closed = F2Matrix(tuple(range(len(rows))), cols, tuple(rows))
    if within is not None and closed.kernel().intersect(within) != n.kernel().intersect(within):
        raise ConsistencyError("closure changed the kernel; the column action does not preserve it")
    return closed


def paired_parity_example(b_edges: Sequence[Hashable], e: Hashable) -> HfSet:
    """{{μ_B, e_0}}: a parity-tracking set next to a lone atom, not CFI-symmetric."""
    if e in b_edges:
        raise ParameterError("the lone edge must lie outside B")
    mu_b, _ = parity_set(list(b_edges))
    return hfset([hfset([mu_b, atom(e, 0)])])


# ---------------------------------------------------------------------------
# the generalized construction
# ---------------------------------------------------------------------------


@dataclass
class GadgetMatrices:
    """All matrices of the construction plus the bookkeeping that makes it symmetric.

    ``row_maps[p][c]`` is the realized row bijection g_[c](π_p) from the rows
    of class ``c`` to the rows of its image class. Row counts of the N
    matrices are upper bounds; no global minimization is attempted.
    """

    edges: tuple
    classes: tuple
    reps: tuple
    group: tuple
    class_image: tuple
    rows_of: dict = field(default_factory=dict)
    m: dict = field(default_factory=dict)
    n: dict = field(default_factory=dict)
    components_of: dict = field(default_factory=dict)
    primers: list = field(default_factory=list)
    transport: dict = field(default_factory=dict)
    row_maps: list = field(default_factory=list)

    def class_key(self, c: int) -> str:
        return min(x.key for x in self.classes[c])

    def total_rows(self) -> int:
        return sum(len(r) for r in self.rows_of.values())

    def to_json(self) -> dict:
        out: dict[str, Any] = {"edges": [to_jsonable(e) for e in self.edges], "classes": {}}
        for c in range(len(self.classes)):
            entry: dict[str, Any] = {"M": _matrix_json(self.m[c])}
            entry["N"] = {
                self.class_key(cy): _matrix_json(self.n[(c, cy)]) for cy in self.components_of.get(c, ())
            }
            out["classes"][self.class_key(c)] = entry
        out["primers"] = [[self.class_key(a), self.class_key(b)] for a, b in self.primers]
        return out


def _matrix_json(m: F2Matrix) -> dict:
    return {
        "rows": [serialize(r) for r in m.row_labels],
        "cols": [serialize(c) for c in m.col_labels],
        "bits": [b for line in m.to_lists() for b in line],
    }


def _leaf_label(c: int) -> RowLabel:
    return ("leaf", c)


def stab_G(mu: HfSet, base_perms: Sequence[BasePerm]) -> list[BasePerm]:
    """Base permutations that fix μ, in the given order."""
    return [pi for pi in base_perms if act_perm(pi, mu) is mu]


def _edges_of(mu: HfSet, g: BaseGraph | None) -> tuple:
    if g is not None:
        missing = mu.atom_edges - set(g.edges)
        if missing:
            raise ValidationError("μ mentions edges outside the base graph")
        return g.edges
    return tuple(sort_labels(mu.atom_edges))


def _edge_positions(pi: BasePerm, edges: tuple) -> tuple:
    where = {e: i for i, e in enumerate(edges)}
    return tuple(where[edge_action(pi, e)] for e in edges)


def build_gadget_matrices(
    mu: HfSet, g: BaseGraph | None = None, base_perms: Sequence[BasePerm] | None = None, verify: bool = True
) -> GadgetMatrices:
    if not mu.is_atom and not mu.children:
        raise ValidationError("the empty set has no circuit")
    edges = _edges_of(mu, g)
    if base_perms is None:
        base_perms = [BasePerm.identity(g.vertices)] if g is not None else []
    group = stab_G(mu, base_perms) if base_perms else []
    if group and g is None:
        raise ValidationError("base permutations need the base graph")
    classes = tuple(sim_classes(mu))
    class_of = {x: i for i, cls in enumerate(classes) for x in cls}
    reps = tuple(min(cls, key=lambda x: x.key) for cls in classes)
    class_image = tuple(tuple(class_of[act_perm(pi, rep)] for rep in reps) for pi in group)
    gm = GadgetMatrices(edges, classes, reps, tuple(group), class_image)
    gm.row_maps = [dict() for _ in group]
    edge_pos = [_edge_positions(pi, edges) for pi in group]
    done: set[int] = set()

    order = sorted(range(len(classes)), key=lambda c: (reps[c].depth, gm.class_key(c)))
    for c in order:
        if c in done:
            continue
        orbit = sorted({img[c] for img in class_image} | {c}, key=gm.class_key)
        if reps[c].is_atom:
            for cc in orbit:
                gm.rows_of[cc] = (_leaf_label(cc),)
                gm.m[cc] = F2Matrix(gm.rows_of[cc], edges, (1 << edges.index(reps[cc].edge),))
            for p, img in enumerate(class_image):
                for cc in orbit:
                    gm.row_maps[p][cc] = {_leaf_label(cc): _leaf_label(img[cc])}
        else:
            _build_set_orbit(gm, orbit, class_of)
        done.update(orbit)

    if verify:
        verify_gadget_matrices(gm, edge_pos)
    return gm


def _build_set_orbit(gm: GadgetMatrices, orbit: list[int], class_of: dict) -> None:
    reps = gm.reps
    for cx in orbit:
        gm.components_of[cx] = tuple(sorted({class_of[y] for y in reps[cx]}, key=gm.class_key))
    primer_x = orbit[0]
    for cy in gm.components_of[primer_x]:
        if (primer_x, cy) in gm.n:
            continue
        gm.primers.append((primer_x, cy))
        gm.n[(primer_x, cy)] = _primer_matrix(gm, primer_x, cy)
        gm.transport[(primer_x, cy)] = ((primer_x, cy), 0 if gm.group else None)
        base = gm.n[(primer_x, cy)]
        for p, img in enumerate(gm.class_image):
            pair = (img[primer_x], img[cy])
            if pair in gm.n:
                continue
            rmap = gm.row_maps[p][cy]
            cols = gm.rows_of[pair[1]]
            pos = _positions(rmap, base.col_labels, cols)
            rows = tuple(permute_bits(r, pos) for r in base.rows)
            labels = tuple((k, pair[0], pair[1]) for k in range(len(rows)))
            gm.n[pair] = F2Matrix(labels, cols, rows)
            gm.transport[pair] = ((primer_x, cy), p)
    for cx in orbit:
        labels: list = []
        rows: list[int] = []
        for cy in gm.components_of[cx]:
            prod = gm.n[(cx, cy)] @ gm.m[cy]
            labels.extend(prod.row_labels)
            rows.extend(prod.rows)
        gm.rows_of[cx] = tuple(labels)
        gm.m[cx] = F2Matrix(tuple(labels), gm.edges, tuple(rows))
    for p, img in enumerate(gm.class_image):
        for cx in orbit:
            gm.row_maps[p][cx] = _row_map(gm, p, cx, img[cx])


def component_of(gm: GadgetMatrices, cx: int, cy: int) -> HfSet:
    """The members of class cy inside the representative of class cx."""
    return hfset(y for y in gm.reps[cx] if y in gm.classes[cy])


def _primer_matrix(gm: GadgetMatrices, cx: int, cy: int) -> F2Matrix:
    my = gm.m[cy]
    gamma = image(my, stab_E(component_of(gm, cx, cy), gm.edges))
    delta = my.column_space()
    n0 = kernel_matrix(gamma, delta)
    comp = component_of(gm, cx, cy)
    perms = [gm.row_maps[p][cy] for p, pi in enumerate(gm.group) if act_perm(pi, comp) is comp]
    closed = symmetric_closure(n0, perms, within=delta)
    labels = tuple((k, cx, cy) for k in range(len(closed.rows)))
    return F2Matrix(labels, closed.col_labels, closed.rows)


def _row_map(gm: GadgetMatrices, p: int, cx: int, target: int) -> dict:
    """g_[x](π): the k-th row goes to the (t+1)-st equal row of the image matrix.

    Here t counts earlier rows equal to row k in N[x][y], and equality in the
    image is taken after moving the columns by g_[y](π).
    """
    img = gm.class_image[p]
    out: dict = {}
    for cy in gm.components_of[cx]:
        src = gm.n[(cx, cy)]
        dst = gm.n[(target, img[cy])]
        pos = _positions(gm.row_maps[p][cy], src.col_labels, dst.col_labels)
        seen: dict[int, int] = {}
        slots: dict[int, list[int]] = {}
        for j, r in enumerate(dst.rows):
            slots.setdefault(r, []).append(j)
        for k, r in enumerate(src.rows):
            t = seen.get(r, 0)
            seen[r] = t + 1
            moved = permute_bits(r, pos)
            candidates = slots.get(moved, [])
            if t >= len(candidates):
                raise ConsistencyError("image matrix lacks a matching row for the duplicate-rank rule")
            out[src.row_labels[k]] = dst.row_labels[candidates[t]]
    return out


def verify_gadget_matrices(gm: GadgetMatrices, edge_pos: Sequence[tuple] | None = None) -> None:
    """Exact kernel identities and literal row/column equivariance, or ConsistencyError."""
    edges = gm.edges
    for c, rep in enumerate(gm.reps):
        if gm.m[c].kernel() != stab_E(rep, edges):
            raise ConsistencyError(f"Ker M differs from Stab_E for class {gm.class_key(c)}")
        for cy in gm.components_of.get(c, ()):
            prod = gm.n[(c, cy)] @ gm.m[cy]
            if prod.kernel() != stab_E(component_of(gm, c, cy), edges):
                raise ConsistencyError("Ker N·M differs from the component stabilizer")
    all_rows = [lab for rows in gm.rows_of.values() for lab in rows]
    if len(set(all_rows)) != len(all_rows):
        raise ConsistencyError("row index sets overlap")
    if edge_pos is None:
        edge_pos = [_edge_positions(pi, edges) for pi in gm.group]
    for p, img in enumerate(gm.class_image):
        for c in range(len(gm.classes)):
            rmap = gm.row_maps[p][c]
            src, dst = gm.m[c], gm.m[img[c]]
            if sorted(map(serialize, rmap.values())) != sorted(map(serialize, dst.row_labels)):
                raise ConsistencyError("row map is not a bijection onto the image rows")
            where = {lab: i for i, lab in enumerate(dst.row_labels)}
            for lab, r in zip(src.row_labels, src.rows):
                if dst.rows[where[rmap[lab]]] != permute_bits(r, edge_pos[p]):
                    raise ConsistencyError("M matrices are not equivariant")


@dataclass(frozen=True)
class GeneralizedCircuit:
    """Ĉ(μ) pruned to the root, plus the full multi-output DAG it was cut from.

    ``outputs`` are all rows of M[μ]. Base symmetries act on the full DAG;
    the chosen root may move inside ``outputs``.
    """

    circuit: XorCircuit
    matrices: GadgetMatrices
    pruned: int
    children: Mapping
    labels: Mapping
    outputs: tuple

    def gate_map(self, p: int) -> dict:
        """The gate bijection induced by the p-th element of Stab_G(μ)."""
        out: dict = {}
        for rmap in self.matrices.row_maps[p].values():
            out.update(rmap)
        return out

    def root_orbit(self) -> frozenset:
        root = self.circuit.root
        return frozenset(self.gate_map(p)[root] for p in range(len(self.matrices.group))) or frozenset([root])

    def row_of_gate(self, gate: RowLabel) -> frozenset:
        """Edges in the M row that the gate realizes."""
        for c, rows in self.matrices.rows_of.items():
            if gate in rows:
                m = self.matrices.m[c]
                return frozenset(e for i, e in enumerate(m.col_labels) if m.rows[rows.index(gate)] >> i & 1)
        raise KeyError(gate)


def build_generalized_circuit(
    mu: HfSet, g: BaseGraph | None = None, base_perms: Sequence[BasePerm] | None = None, verify: bool = True
) -> GeneralizedCircuit:
    """Ĉ(μ): gates are M rows, wires follow the ones of N, root is a heaviest row of M[μ]."""
    gm = build_gadget_matrices(mu, g, base_perms, verify)
    mu_class = next(i for i, cls in enumerate(gm.classes) if mu in cls)
    root_rows = gm.m[mu_class]
    if not root_rows.rows:
        raise ValidationError("μ is fixed by every flip, so Ĉ(μ) has no gates")
    weights = [r.bit_count() for r in root_rows.rows]
    root = root_rows.row_labels[weights.index(max(weights))]
    children: dict = {}
    labels: dict = {}
    for c, rows in gm.rows_of.items():
        if gm.reps[c].is_atom:
            labels[rows[0]] = gm.reps[c].edge
            children[rows[0]] = ()
            continue
        for cy in gm.components_of[c]:
            nm = gm.n[(c, cy)]
            for lab, r in zip(nm.row_labels, nm.rows):
                children[lab] = tuple(nm.col_labels[i] for i in range(len(nm.col_labels)) if r >> i & 1)
    keep = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in children[v]:
            if w not in keep:
                keep.add(w)
                stack.append(w)
    wires = frozenset((v, w) for v in keep for w in children[v])
    circuit = XorCircuit(tuple(keep), wires, root, {v: lab for v, lab in labels.items() if v in keep})
    outputs = root_rows.row_labels
    out = GeneralizedCircuit(circuit, gm, len(children) - len(keep), children, labels, outputs)
    if verify:
        for v in keep:
            if circuit.sensitivity(v) != out.row_of_gate(v):
                raise ConsistencyError(f"gate {v!r} does not compute its M row")
        bad = symmetry_failures(out)
        if bad:
            raise ConsistencyError(f"{len(bad)} base symmetries fail to act on the gadget DAG")
    return out


def symmetry_failures(gc: GeneralizedCircuit) -> list[BasePerm]:
    """Elements of Stab_G(μ) whose row maps are not automorphisms of the full DAG.

    An automorphism here permutes gates, maps wires onto wires both ways,
    sends leaf labels e to π(e) and maps outputs to outputs.
    """
    gm = gc.matrices
    wires = {(v, w) for v, ws in gc.children.items() for w in ws}
    outputs = set(gc.outputs)
    failures = []
    for p, pi in enumerate(gm.group):
        sigma = gc.gate_map(p)
        ok = set(sigma) == set(gc.children) and set(sigma.values()) == set(gc.children)
        ok = ok and {(sigma[v], sigma[w]) for v, w in wires} == wires
        ok = ok and all(gc.labels.get(sigma[v]) == edge_action(pi, lab) for v, lab in gc.labels.items())
        ok = ok and {sigma[v] for v in outputs} == outputs
        if not ok:
            failures.append(pi)
    return failures


# ---------------------------------------------------------------------------
# symmetric bases
# ---------------------------------------------------------------------------


def _unit(ambient: tuple, label: Hashable) -> int:
    return 1 << ambient.index(label)


def decompose_stab(gamma: F2Subspace) -> tuple[frozenset, frozenset] | None:
    """(A, B) with Γ = F2^A ⊕ even(F2^B), or None when Γ has no such shape."""
    amb = gamma.ambient
    a = [e for e in amb if gamma.contains_bits(_unit(amb, e))]
    b = [e for e in amb if e not in set(a)]
    candidate = F2Subspace.from_bits(amb, [_unit(amb, e) for e in a] + list(F2Subspace.even_weight(amb, b).basis if b else ()))
    if candidate != gamma:
        return None
    return frozenset(a), frozenset(b)


@dataclass(frozen=True)
class SymBasisPair:
    """Bases B_Γ ⊆ B of Γ and of the ambient space; vectors are edge sets."""

    basis_gamma: tuple
    basis: tuple
    stab_index: int
    pivot: Hashable


def _act_on_set(grp: PermGroup, p: tuple, vec: frozenset) -> frozenset:
    return frozenset(grp.domain[p[grp.point_index(e)]] for e in vec)


def joint_stabilizer_index(grp: PermGroup, basis_gamma: Iterable[frozenset], basis: Iterable[frozenset]) -> int:
    bg, bb = frozenset(basis_gamma), frozenset(basis)
    elems = grp.enumerate()
    fixed = sum(
        1
        for p in elems
        if frozenset(_act_on_set(grp, p, v) for v in bg) == bg and frozenset(_act_on_set(grp, p, v) for v in bb) == bb
    )
    return len(elems) // fixed


def symmetric_basis(gamma: F2Subspace, stab_group: PermGroup) -> SymBasisPair:
    """Unit vectors on A, pairs {e, f} on B with a fixed f, then χ(f) to complete."""
    shape = decompose_stab(gamma)
    if shape is None:
        raise ValidationError("subspace is not a full space plus an even-weight space")
    a, b = shape
    if not b:
        raise ValidationError("Γ is the whole space; a component stabilizer has codimension one")
    if set(stab_group.domain) != set(gamma.ambient):
        raise ValidationError("group domain must be the ambient coordinates")
    order = [stab_group.point_index(e) for e in gamma.ambient]
    for p in stab_group.generators:
        moved = [order.index(p[order[i]]) for i in range(len(order))]
        if not all(gamma.contains_bits(permute_bits(v, moved)) for v in gamma.basis):
            raise ValidationError("group does not preserve Γ")
    f = sort_labels(b)[0]
    basis_gamma = tuple([frozenset([e]) for e in sort_labels(a)] + [frozenset([e, f]) for e in sort_labels(b) if e != f])
    basis = basis_gamma + (frozenset([f]),)
    idx = joint_stabilizer_index(stab_group, basis_gamma, basis)
    if idx > len(gamma.ambient):
        raise ConsistencyError(f"joint stabilizer index {idx} exceeds the edge count")
    return SymBasisPair(basis_gamma, basis, idx, f)


# ---------------------------------------------------------------------------
# spaces without symmetric bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleReport:
    n: int
    size: int
    parts: tuple
    dim: int
    codim: int
    group_order: int
    invariant: bool
    min_index: int | None
    pairs_checked: int


def counterexample_space(n: int, exhaustive: bool | None = None) -> tuple[F2Subspace, PermGroup, CounterexampleReport]:
    """Γ_n = ⊕ even(F2^P) over ⌈log2 n⌉ equal even parts P; G_n stabilizes the partition.

    The coordinate count is n rounded up to a multiple of 2⌈log2 n⌉.
    """
    if not 4 <= n <= 32:
        raise ParameterError("counterexample size must be in 4..32")
    k = math.ceil(math.log2(n))
    size = -(-n // (2 * k)) * 2 * k
    block = size // k
    domain = tuple(range(1, size + 1))
    parts = tuple(tuple(domain[i * block:(i + 1) * block]) for i in range(k))
    gamma = F2Subspace.from_bits(
        domain, [b for part in parts for b in F2Subspace.even_weight(domain, part).basis]
    )
    gens = [cycle_perm(size, [part[j] - 1, part[j + 1] - 1]) for part in parts for j in range(block - 1)]
    for i in range(k - 1):
        swap = list(range(size))
        for j in range(block):
            a, b = parts[i][j] - 1, parts[i + 1][j] - 1
            swap[a], swap[b] = b, a
        gens.append(tuple(swap))
    grp = PermGroup(domain, tuple(gens))
    invariant = all(
        gamma.contains_bits(permute_bits(v, p)) for p in grp.generators for v in gamma.basis
    )
    order = math.factorial(block) ** k * math.factorial(k)
    if exhaustive is None:
        exhaustive = n <= 4
    min_index = None
    checked = 0
    if exhaustive:
        min_index, checked = _min_basis_pair_index(gamma, grp)
    report = CounterexampleReport(n, size, parts, gamma.dim, gamma.codim(), order, invariant, min_index, checked)
    return gamma, grp, report


def _min_basis_pair_index(gamma: F2Subspace, grp: PermGroup) -> tuple[int, int]:
    """Minimum of [G : Stab(B_Γ) ∩ Stab(B)] over all bases B_Γ ⊆ B."""
    size = len(gamma.ambient)
    elems = grp.enumerate()
    members = [v for v in gamma.elements_bits() if v]
    others = [v for v in range(1, 1 << size)]
    best = None
    count = 0
    for bg in itertools.combinations(sorted(members), gamma.dim):
        if len(rref_bits(bg)[0]) != gamma.dim:
            continue
        for ext in itertools.combinations(others, size - gamma.dim):
            full = bg + ext
            if len(rref_bits(full)[0]) != size:
                continue
            count += 1
            sg, sb = frozenset(bg), frozenset(full)
            fixed = 0
            for p in elems:
                if frozenset(permute_bits(v, p) for v in sg) == sg and frozenset(permute_bits(v, p) for v in sb) == sb:
                    fixed += 1
            idx = len(elems) // fixed
            if best is None or idx < best:
                best = idx
    assert best is not None
    return best, count


__all__ = [
    "CounterexampleReport",
    "GadgetMatrices",
    "GeneralizedCircuit",
    "SymBasisPair",
    "build_gadget_matrices",
    "build_generalized_circuit",
    "component_of",
    "counterexample_space",
    "decompose_stab",
    "extend_basis",
    "joint_stabilizer_index",
    "kernel_matrix",
    "paired_parity_example",
    "permute_bits",
    "stab_G",
    "symmetric_basis",
    "symmetric_closure",
    "symmetry_failures",
    "verify_gadget_matrices",
]
