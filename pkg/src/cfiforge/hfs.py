"""Hereditarily finite sets over edge-gadget atoms.

Sets are hash-consed in a global append-only arena, so structural equality is
object identity. Edge flips and base permutations act recursively; orbits,
stabilizers, supports and connected components are computed from single-edge
flips restricted to the support, which is complete because flips outside
a CFI-support act trivially.
"""

from __future__ import annotations

import hashlib
import itertools
import threading
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

from .cfi import CfiStructure, flip_with_odd_set, iter_flip_space
from .errors import ParameterError, ResourceLimitError, StructuralError, ValidationError
from .f2 import F2Subspace, kernel_bits, rref_bits
from .graphs import BaseGraph, BasePerm, cycle_space, edge_action
from .labels import display, from_jsonable, serialize, sort_labels, to_jsonable

DEFAULT_SUPPORT_CAP = 20
DEFAULT_CYCLE_CAP = 24
DEFAULT_ATOM_CAP = 24


class HfSet:
    """An interned h.f. set: either an atom ``edge_bit`` or a set of interned children."""

    __slots__ = ("id", "edge", "bit", "children", "key", "depth", "_atom_edges", "_flip1", "_sup", "_orbit", "_local", "_tc")

    def __init__(self, ident: int, edge: Any, bit: int | None, children: tuple | None, key: str, depth: int) -> None:
        self.id = ident
        self.edge = edge
        self.bit = bit
        self.children = children
        self.key = key
        self.depth = depth
        self._flip1: dict = {}
        self._sup: frozenset | None = None
        self._orbit: frozenset | None = None
        self._local: tuple | None = None
        self._tc: frozenset | None = None
        if children is None:
            self._atom_edges = frozenset([edge])
        else:
            acc: set = set()
            for c in children:
                acc |= c._atom_edges
            self._atom_edges = frozenset(acc)

    @property
    def is_atom(self) -> bool:
        return self.children is None

    @property
    def atom_edges(self) -> frozenset:
        return self._atom_edges

    def __iter__(self) -> Iterator["HfSet"]:
        return iter(self.children or ())

    def __len__(self) -> int:
        return len(self.children or ())

    def __contains__(self, y: object) -> bool:
        return self.children is not None and y in self.children

    def __lt__(self, other: "HfSet") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return pretty(self)


class _Arena:
    def __init__(self) -> None:
        self._table: dict = {}
        self._lock = threading.Lock()

    def intern(self, key: tuple, build) -> HfSet:
        found = self._table.get(key)
        if found is not None:
            return found
        with self._lock:
            found = self._table.get(key)
            if found is None:
                found = build(len(self._table))
                self._table[key] = found
            return found

    def __len__(self) -> int:
        return len(self._table)


ARENA = _Arena()


def _digest(parts: Iterable[str]) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\x00")
    return h.hexdigest()[:32]


def atom(edge: Hashable, bit: int) -> HfSet:
    if bit not in (0, 1):
        raise ValidationError("atom bit must be 0 or 1")
    return ARENA.intern(("a", edge, bit), lambda i: HfSet(i, edge, bit, None, _digest(["a", serialize(edge), str(bit)]), 0))


def hfset(children: Iterable[HfSet]) -> HfSet:
    kids = tuple(sorted(set(children), key=lambda c: c.id))
    ids = tuple(c.id for c in kids)
    depth = 1 + max((c.depth for c in kids), default=0)

    def build(i: int) -> HfSet:
        key = _digest(["s"] + sorted(c.key for c in kids))
        return HfSet(i, None, None, kids, key, depth)

    return ARENA.intern(("s", ids), build)


def empty_set() -> HfSet:
    return hfset(())


def pretty(x: HfSet) -> str:
    if x.is_atom:
        return f"{x.edge}_{x.bit}"
    return "{" + ", ".join(sorted(pretty(c) for c in x)) + "}"


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------


def tc(x: HfSet) -> frozenset:
    """Transitive closure including ``x`` itself."""
    if x._tc is None:
        seen = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for c in y:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        x._tc = frozenset(seen)
    return x._tc


def sorted_by_key(xs: Iterable[HfSet]) -> list[HfSet]:
    return sorted(xs, key=lambda y: y.key)


def bottom_up(xs: Iterable[HfSet]) -> list[HfSet]:
    return sorted(xs, key=lambda y: (y.depth, y.key))


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------


def flip_one(x: HfSet, e: Hashable) -> HfSet:
    """ρ_{{e}}(x), memoized on the object."""
    if e not in x._atom_edges:
        return x
    cached = x._flip1.get(e)
    if cached is None:
        if x.is_atom:
            cached = atom(x.edge, 1 - x.bit)
        else:
            cached = hfset(flip_one(c, e) for c in x.children)
        x._flip1[e] = cached
    return cached


def act_flip(flip: Iterable[Hashable], x: HfSet) -> HfSet:
    for e in set(flip) & x._atom_edges:
        x = flip_one(x, e)
    return x


def act_perm(pi: BasePerm, x: HfSet) -> HfSet:
    """πx with atoms mapped to π(e)_i."""
    memo: dict = {}

    def rec(y: HfSet) -> HfSet:
        out = memo.get(y)
        if out is None:
            if y.is_atom:
                out = atom(edge_action(pi, y.edge), y.bit)
            else:
                out = hfset(rec(c) for c in y.children)
            memo[y] = out
        return out

    return rec(x)


def act_aut(pi: BasePerm, flip: Iterable[Hashable], x: HfSet) -> HfSet:
    """(ρ_F, π)x: flip first, then relabel."""
    return act_perm(pi, act_flip(flip, x))


# ---------------------------------------------------------------------------
# supports, orbits and stabilizers
# ---------------------------------------------------------------------------


def min_cfi_support(x: HfSet) -> frozenset:
    if x._sup is None:
        x._sup = frozenset(e for e in x._atom_edges if flip_one(x, e) is not x)
    return x._sup


def _sorted_support(x: HfSet) -> tuple:
    return tuple(sort_labels(min_cfi_support(x)))


def _explore(x: HfSet, cap: int) -> tuple[tuple, list[int], frozenset]:
    """Orbit BFS over single flips of the support, with Schreier relations."""
    if x._local is not None and x._orbit is not None:
        sup, basis = x._local
        return sup, basis, x._orbit
    sup = _sorted_support(x)
    if len(sup) > cap:
        raise ResourceLimitError(f"support size {len(sup)} exceeds cap {cap}", partial=len(sup))
    word = {x: 0}
    queue = deque([x])
    relations = []
    while queue:
        y = queue.popleft()
        wy = word[y]
        for j, e in enumerate(sup):
            z = flip_one(y, e)
            w = wy ^ (1 << j)
            wz = word.get(z)
            if wz is None:
                word[z] = w
                queue.append(z)
            elif w != wz:
                relations.append(w ^ wz)
    basis, _ = rref_bits(relations)
    orbit = frozenset(word)
    local = (sup, basis)
    for y in orbit:
        y._orbit = orbit
        y._local = local
        y._sup = frozenset(sup)
    return sup, basis, orbit


def orbit_members(x: HfSet, cap: int = DEFAULT_SUPPORT_CAP) -> frozenset:
    """Orb_E(x) as a set of interned objects."""
    return _explore(x, cap)[2]


def _ambient(edges: Sequence[Hashable] | BaseGraph) -> tuple:
    return edges.edges if isinstance(edges, BaseGraph) else tuple(edges)


def _embed(ambient: tuple, sup: tuple, local_bits: Iterable[int]) -> list[int]:
    index = {e: i for i, e in enumerate(ambient)}
    try:
        pos = [index[e] for e in sup]
    except KeyError as exc:
        raise StructuralError(f"support edge {exc.args[0]!r} is not in the ambient edge set") from None
    out = []
    for b in local_bits:
        v = 0
        j = 0
        while b:
            if b & 1:
                v |= 1 << pos[j]
            b >>= 1
            j += 1
        out.append(v)
    return out


def _stab_from_local(ambient: tuple, sup: tuple, basis: list[int]) -> F2Subspace:
    in_sup = set(sup)
    vecs = _embed(ambient, sup, basis)
    vecs += [1 << i for i, e in enumerate(ambient) if e not in in_sup]
    return F2Subspace.from_bits(ambient, vecs)


def stab_E(x: HfSet, edges: Sequence[Hashable] | BaseGraph, cap: int = DEFAULT_SUPPORT_CAP) -> F2Subspace:
    """Stab_E(x) ≤ F2^E, ambient ordered as given."""
    ambient = _ambient(edges)
    sup, basis, _ = _explore(x, cap)
    return _stab_from_local(ambient, sup, basis)


def stab_E_bruteforce(x: HfSet, edges: Sequence[Hashable] | BaseGraph, cap: int = DEFAULT_SUPPORT_CAP) -> F2Subspace:
    """Oracle: try every flip inside the support."""
    ambient = _ambient(edges)
    sup = _sorted_support(x)
    if len(sup) > cap:
        raise ResourceLimitError(f"support size {len(sup)} exceeds cap {cap}", partial=len(sup))
    fixing = []
    for mask in range(1 << len(sup)):
        flip = [sup[j] for j in range(len(sup)) if mask >> j & 1]
        if act_flip(flip, x) is x:
            fixing.append(mask)
    return _stab_from_local(ambient, sup, fixing)


def orb_E_size(x: HfSet, cap: int = DEFAULT_SUPPORT_CAP) -> int:
    sup, basis, orbit = _explore(x, cap)
    size = 1 << (len(sup) - len(basis))
    assert size == len(orbit)
    return size


def orb_E(x: HfSet, cap: int = DEFAULT_SUPPORT_CAP) -> list[HfSet]:
    return sorted_by_key(orbit_members(x, cap))


def orb_cfi_size(x: HfSet, g: BaseGraph, cap: int = DEFAULT_CYCLE_CAP, support_cap: int = DEFAULT_SUPPORT_CAP) -> int:
    """Orbit size under cycle-space flips: 2^{dim cyc − dim(stab ∩ cyc)}."""
    cyc = cycle_space(g)
    if cyc.dim > cap:
        raise ResourceLimitError(f"cycle space dimension {cyc.dim} exceeds cap {cap}", partial=cyc.dim)
    stab = stab_E(x, g, support_cap)
    return 1 << (cyc.dim - cyc.intersect(stab).dim)


def orb_cfi_bruteforce(x: HfSet, g: BaseGraph, cap: int = DEFAULT_CYCLE_CAP) -> int:
    """Oracle: BFS over the fundamental cycle flips."""
    cyc = cycle_space(g)
    if cyc.dim > cap:
        raise ResourceLimitError(f"cycle space dimension {cyc.dim} exceeds cap {cap}", partial=cyc.dim)
    gens = [g.edges_of_bits(b) for b in cyc.basis]
    seen = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for f in gens:
            z = act_flip(f, y)
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return len(seen)


def components(x: HfSet, cap: int = DEFAULT_SUPPORT_CAP) -> list[frozenset]:
    """C(x): children of x grouped by edge-flip orbit."""
    if x.is_atom:
        return []
    groups: dict = {}
    for c in x.children:
        groups.setdefault(orbit_members(c, cap), []).append(c)
    return sorted((frozenset(v) for v in groups.values()), key=lambda s: min(y.key for y in s))


def sim_classes(mu: HfSet, cap: int = DEFAULT_SUPPORT_CAP) -> list[frozenset]:
    """Partition of tc(μ) into ∼_E classes, each class ordered by its smallest key."""
    closure = tc(mu)
    seen: set = set()
    out = []
    for y in bottom_up(closure):
        if y in seen:
            continue
        cls = orbit_members(y, cap) & closure
        seen |= cls
        out.append(cls)
    return sorted(out, key=lambda s: (min(y.depth for y in s), min(y.key for y in s)))


def component_set(gamma: Iterable[HfSet]) -> HfSet:
    """The component viewed as an h.f. set in its own right."""
    return hfset(gamma)


def max_orb_E(mu: HfSet, cap: int = DEFAULT_SUPPORT_CAP) -> int:
    return max(orb_E_size(y, cap) for y in tc(mu))


def max_orb_cfi(mu: HfSet, g: BaseGraph, cap: int = DEFAULT_CYCLE_CAP) -> int:
    return max(orb_cfi_size(y, g, cap) for y in tc(mu))


# ---------------------------------------------------------------------------
# CFI-symmetry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    x: HfSet
    component: frozenset | None
    flip: frozenset
    reason: str


@dataclass(frozen=True)
class SymmetryReport:
    symmetric: bool
    violation: Violation | None = None

    def __bool__(self) -> bool:
        return self.symmetric


def _local_stab(obj: HfSet, ambient: tuple, cap: int) -> F2Subspace:
    return stab_E(obj, ambient, cap)


def _functional(stab: F2Subspace) -> int | None:
    """The nonzero a with stab = ker(a), when stab is a hyperplane."""
    if stab.codim() != 1:
        return None
    (a,) = stab.annihilator_bits()
    return a


def _bits_to_edges(ambient: tuple, bits: int) -> frozenset:
    return frozenset(e for i, e in enumerate(ambient) if bits >> i & 1)


def is_cfi_symmetric(mu: HfSet, cap: int = DEFAULT_SUPPORT_CAP) -> SymmetryReport:
    """Check both clauses of CFI-symmetry for every member of tc(μ).

    An atom e_i counts as having one virtual component that flips exactly
    when e is flipped. Components are checked bottom-up; the first failure
    is returned as a witness.
    """
    if mu.is_atom:
        return SymmetryReport(True)
    ambient = tuple(sort_labels(mu.atom_edges))
    index = {e: i for i, e in enumerate(ambient)}
    comp_functional: dict = {}

    def element_functional(y: HfSet) -> int | None:
        if y.is_atom:
            return 1 << index[y.edge]
        total = 0
        for gamma in components(y, cap):
            a = comp_functional.get(gamma)
            if a is None:
                return None
            total ^= a
        return total

    for x in bottom_up(tc(mu)):
        if x.is_atom:
            continue
        for gamma in components(x, cap):
            if gamma in comp_functional:
                continue
            stab = _local_stab(component_set(gamma), ambient, cap)
            a = _functional(stab)
            if a is None:
                size = 1 << stab.codim()
                return SymmetryReport(False, Violation(x, gamma, frozenset(), f"component orbit size {size} instead of 2"))
            for y in sorted_by_key(gamma):
                ay = element_functional(y)
                if ay is None:
                    return SymmetryReport(False, Violation(y, None, frozenset(), "element has a non-symmetric component"))
                if ay != a:
                    diff = (ay ^ a) & -(ay ^ a)
                    return SymmetryReport(
                        False,
                        Violation(x, gamma, _bits_to_edges(ambient, diff), "component stabilizer differs from the flipped-component parity"),
                    )
            comp_functional[gamma] = a
    total = element_functional(mu)
    if total is None:
        return SymmetryReport(False, Violation(mu, None, frozenset(), "top level has a non-symmetric component"))
    stab_mu = _local_stab(mu, ambient, cap)
    parity_kernel = F2Subspace.from_bits(ambient, kernel_bits([total], len(ambient)))
    if stab_mu != parity_kernel:
        for b in stab_mu.basis:
            if not parity_kernel.contains_bits(b):
                return SymmetryReport(False, Violation(mu, None, _bits_to_edges(ambient, b), "stabilized by a flip of odd component parity"))
        for b in parity_kernel.basis:
            if not stab_mu.contains_bits(b):
                return SymmetryReport(False, Violation(mu, None, _bits_to_edges(ambient, b), "moved by a flip of even component parity"))
    return SymmetryReport(True)


def flipped_component_count(y: HfSet, flip: Iterable[Hashable], cap: int = DEFAULT_SUPPORT_CAP) -> int:
    """|{γ' ∈ C(y) : ρ_F(γ') ≠ γ'}|, with the virtual component for atoms."""
    f = frozenset(flip)
    if y.is_atom:
        return int(y.edge in f)
    count = 0
    for gamma in components(y, cap):
        image = frozenset(act_flip(f, z) for z in gamma)
        count += image != gamma
    return count


# ---------------------------------------------------------------------------
# parity-tracking sets
# ---------------------------------------------------------------------------


def parity_set(edges: Sequence[Hashable]) -> tuple[HfSet, HfSet]:
    """(μ_B, μ̃_B) built by adding the edges in order, starting from the first."""
    edges = list(edges)
    if not edges:
        raise ParameterError("parity_set needs at least one edge")
    if len(set(edges)) != len(edges):
        raise ParameterError("parity_set edges must be distinct")
    mu, tilde = atom(edges[0], 0), atom(edges[0], 1)
    for e in edges[1:]:
        e0, e1 = atom(e, 0), atom(e, 1)
        mu, tilde = hfset([hfset([mu, e0]), hfset([tilde, e1])]), hfset([hfset([mu, e1]), hfset([tilde, e0])])
    return mu, tilde


# ---------------------------------------------------------------------------
# supports under the full automorphism group of a CFI structure
# ---------------------------------------------------------------------------


def structure_automorphisms(c: CfiStructure, base_perms: Sequence[BasePerm]) -> Iterator[tuple[BasePerm, frozenset]]:
    """All (π, F) with (ρ_F, π) ∈ Aut(𝔊^S), for π ranging over ``base_perms``."""
    g = c.base
    cyc = cycle_space(g)
    for pi in base_perms:
        inv = pi.inverse()
        target = c.odd_set ^ frozenset(inv(v) for v in c.odd_set)
        f0 = flip_with_odd_set(g, target)
        if f0 is None:
            continue
        for cycle in iter_flip_space(cyc):
            yield pi, f0 ^ cycle


def _moved_atoms(g: BaseGraph, pi: BasePerm, flip: frozenset) -> frozenset:
    moved = []
    for e in g.edges:
        f = edge_action(pi, e)
        flipped = e in flip
        for i in (0, 1):
            if f != e or flipped:
                moved.append((e, i))
    return frozenset(moved)


@dataclass(frozen=True)
class AutSupport:
    atoms: frozenset
    exhaustive: bool

    @property
    def size(self) -> int:
        return len(self.atoms)


def min_aut_support(
    mu: HfSet, c: CfiStructure, base_perms: Sequence[BasePerm], cap: int = DEFAULT_ATOM_CAP
) -> AutSupport:
    """Smallest set of atoms whose pointwise stabilizer in Aut(𝔊^S) fixes μ.

    Beyond ``cap`` atoms the result is the upper bound: one atom per edge of
    sup_CFI(μ) plus the atoms of a star, flagged as non-exhaustive.
    """
    g = c.base
    if 2 * len(g.edges) > cap:
        star = g.vertices[0]
        chosen = {(e, 0) for e in min_cfi_support(mu)} | {(e, 0) for e in g.incident(star)}
        return AutSupport(frozenset(chosen), exhaustive=False)
    hitting: set = set()
    for pi, flip in structure_automorphisms(c, base_perms):
        if act_aut(pi, flip, mu) is not mu:
            hitting.add(_moved_atoms(g, pi, flip))
    if not hitting:
        return AutSupport(frozenset(), exhaustive=True)
    if frozenset() in hitting:
        raise ValidationError("an automorphism moving no atom moved the set")
    minimal = [s for s in hitting if not any(t < s for t in hitting)]
    candidates = sorted(set().union(*minimal), key=lambda a: (serialize(a[0]), a[1]))
    for k in range(1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, k):
            chosen = set(combo)
            if all(chosen & s for s in minimal):
                return AutSupport(frozenset(combo), exhaustive=True)
    raise AssertionError("the full candidate set always hits every moved set")


def support_gap(mu: HfSet, c: CfiStructure, base_perms: Sequence[BasePerm], cap: int = DEFAULT_ATOM_CAP) -> Fraction | None:
    """α(μ) = s(μ) / |sup_CFI(μ)|, or None when the CFI-support is empty."""
    sup = min_cfi_support(mu)
    if not sup:
        return None
    return Fraction(min_aut_support(mu, c, base_perms, cap).size, len(sup))


def orb_full_aut_size(mu: HfSet, c: CfiStructure, base_perms: Sequence[BasePerm]) -> int:
    """|Orb_{𝔊^S}(μ)| by applying every automorphism of the structure."""
    return len({act_aut(pi, flip, mu) for pi, flip in structure_automorphisms(c, base_perms)})


def components_after_removal(g: BaseGraph, removed: Iterable[tuple]) -> int:
    """Number of connected components of (V, E minus ``removed``)."""
    gone = set(removed)
    parent = {v: v for v in g.vertices}

    def find(v: Hashable) -> Hashable:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in g.edges:
        if (u, v) not in gone:
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
    return len({find(v) for v in g.vertices})


# ---------------------------------------------------------------------------
# reports and io
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupportReport:
    key: str
    sup_cfi: frozenset
    stab_E: F2Subspace
    orb_E_size: int
    orb_cfi_size: int | None

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "sup_cfi": [to_jsonable(e) for e in sort_labels(self.sup_cfi)],
            "stab_E": self.stab_E.to_json(),
            "orb_E_size": self.orb_E_size,
            "orb_cfi_size": self.orb_cfi_size,
        }

    def csv_row(self) -> list[str]:
        return [
            self.key,
            ";".join(display(e) for e in sort_labels(self.sup_cfi)),
            str(self.stab_E.dim),
            str(self.orb_E_size),
            "" if self.orb_cfi_size is None else str(self.orb_cfi_size),
        ]

    CSV_HEADER = ("key", "sup_cfi", "stab_dim", "orb_E_size", "orb_cfi_size")


def support_report(x: HfSet, edges: Sequence[Hashable] | BaseGraph | None = None, g: BaseGraph | None = None) -> SupportReport:
    graph = g if g is not None else (edges if isinstance(edges, BaseGraph) else None)
    ambient = _ambient(edges) if edges is not None else tuple(sort_labels(x.atom_edges))
    return SupportReport(
        key=x.key,
        sup_cfi=min_cfi_support(x),
        stab_E=stab_E(x, ambient),
        orb_E_size=orb_E_size(x),
        orb_cfi_size=orb_cfi_size(x, graph) if graph is not None else None,
    )


def to_json(x: HfSet) -> Any:
    memo: dict = {}

    def rec(y: HfSet) -> Any:
        if y not in memo:
            if y.is_atom:
                memo[y] = {"atom": [to_jsonable(y.edge), y.bit]}
            else:
                memo[y] = {"set": [rec(c) for c in sorted_by_key(y.children)]}
        return memo[y]

    return rec(x)


def from_json(obj: Mapping[str, Any]) -> HfSet:
    if "atom" in obj:
        edge, bit = obj["atom"]
        return atom(from_jsonable(edge), int(bit))
    if "set" in obj:
        return hfset(from_json(c) for c in obj["set"])
    raise ValidationError("h.f. set JSON needs an 'atom' or 'set' key")
