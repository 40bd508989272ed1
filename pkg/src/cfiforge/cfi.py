"""CFI structures over base graphs, edge flips, base permutations and the CFI query."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import ConsistencyError, ResourceLimitError, ValidationError
from .f2 import F2Subspace, solve_bits
from .graphs import BaseGraph, BasePerm, cycle_space, edge_action, odd_degree_vertices
from .labels import from_jsonable, serialize, sort_labels, to_jsonable

MAX_DEGREE = 20


@dataclass(frozen=True, slots=True)
class EdgeNode:
    """Edge-gadget atom ``e_bit``."""

    edge: tuple
    bit: int


@dataclass(frozen=True, slots=True)
class GadgetNode:
    """Vertex-gadget node ``v^X``; bit j of ``mask`` marks the j-th edge of E(v)."""

    vertex: Hashable
    mask: int


Node = Union[EdgeNode, GadgetNode]


@dataclass(frozen=True)
class EdgeFlip:
    """The flip ρ_F for an edge set F."""

    edges: frozenset = frozenset()

    def __mul__(self, other: "EdgeFlip") -> "EdgeFlip":
        return EdgeFlip(self.edges ^ other.edges)

    def bits(self, g: BaseGraph) -> int:
        return g.edge_bits(self.edges)


def local_mask(g: BaseGraph, v: Hashable, edges: Iterable[tuple]) -> int:
    """Bitmask over E(v) of the given edges that are incident to v."""
    chosen = set(edges)
    m = 0
    for j, e in enumerate(g.incident(v)):
        if e in chosen:
            m |= 1 << j
    return m


def mask_edges(g: BaseGraph, v: Hashable, mask: int) -> frozenset:
    return frozenset(e for j, e in enumerate(g.incident(v)) if mask >> j & 1)


@dataclass(frozen=True, eq=False)
class CfiStructure:
    """The gadget graph over ``base`` whose odd gadgets sit at ``odd_set``."""

    base: BaseGraph
    odd_set: frozenset
    _nodes: tuple = field(init=False, repr=False)

    def __post_init__(self) -> None:
        nodes: list[Node] = []
        for e in self.base.edges:
            nodes.append(EdgeNode(e, 0))
            nodes.append(EdgeNode(e, 1))
        for v in self.base.vertices:
            nodes.extend(self.gadget(v))
        object.__setattr__(self, "_nodes", tuple(nodes))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CfiStructure) and self.base == other.base and self.odd_set == other.odd_set

    def __hash__(self) -> int:
        return hash((self.base, self.odd_set))

    def gadget(self, v: Hashable) -> list[GadgetNode]:
        """v*_S: masks whose weight parity equals [v ∈ S]."""
        want = 1 if v in self.odd_set else 0
        d = self.base.degree(v)
        return [GadgetNode(v, m) for m in range(1 << d) if m.bit_count() & 1 == want]

    @property
    def atoms(self) -> list[EdgeNode]:
        return [x for x in self._nodes if isinstance(x, EdgeNode)]

    def nodes(self) -> tuple:
        return self._nodes

    def __contains__(self, x: object) -> bool:
        if isinstance(x, EdgeNode):
            return x.edge in self.base._edge_index and x.bit in (0, 1)
        if isinstance(x, GadgetNode):
            if x.vertex not in self.base._incident:
                return False
            d = self.base.degree(x.vertex)
            return 0 <= x.mask < 1 << d and x.mask.bit_count() & 1 == (1 if x.vertex in self.odd_set else 0)
        return False

    def neighbors(self, x: Node) -> list[Node]:
        if isinstance(x, EdgeNode):
            out: list[Node] = [EdgeNode(x.edge, 1 - x.bit)]
            for v in x.edge:
                j = self.base.incident(v).index(x.edge)
                out.extend(gn for gn in self.gadget(v) if (gn.mask >> j & 1) == x.bit)
            return out
        return [EdgeNode(e, x.mask >> j & 1) for j, e in enumerate(self.base.incident(x.vertex))]

    def degree(self, x: Node) -> int:
        return len(self.neighbors(x))

    def adjacency(self) -> set[frozenset]:
        """Undirected edge set of the gadget graph."""
        out = set()
        for e in self.base.edges:
            out.add(frozenset((EdgeNode(e, 0), EdgeNode(e, 1))))
        for v in self.base.vertices:
            for gn in self.gadget(v):
                for y in self.neighbors(gn):
                    out.add(frozenset((gn, y)))
        return out

    def node_count(self) -> int:
        return len(self._nodes)

    # io ---------------------------------------------------------------------

    def node_label(self, x: Node) -> list:
        if isinstance(x, EdgeNode):
            return ["e", to_jsonable(x.edge), x.bit]
        return ["v", to_jsonable(x.vertex), [to_jsonable(e) for e in sort_labels(mask_edges(self.base, x.vertex, x.mask))]]

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "odd": [to_jsonable(v) for v in sort_labels(self.odd_set)]}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "CfiStructure":
        base = BaseGraph.from_json(obj["base"])
        return build_cfi(base, [from_jsonable(v) for v in obj["odd"]])

    def to_dot(self) -> str:
        names = {x: f"n{i}" for i, x in enumerate(self._nodes)}
        lines = ["graph cfi {"]
        for x, name in names.items():
            shape = "box" if isinstance(x, EdgeNode) else "ellipse"
            lines.append(f"  {name} [label={json.dumps(serialize(self.node_label(x)))}, shape={shape}];")
        for pair in sorted(self.adjacency(), key=lambda p: sorted(names[y] for y in p)):
            a, b = sorted(names[y] for y in pair)
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_cfi(g: BaseGraph, odd_set: Iterable[Hashable] = ()) -> CfiStructure:
    s = frozenset(odd_set)
    unknown = s - set(g.vertices)
    if unknown:
        raise ValidationError(f"odd set has vertices outside the base graph: {sorted(map(str, unknown))}")
    worst = max((g.degree(v) for v in g.vertices), default=0)
    if worst > MAX_DEGREE:
        raise ResourceLimitError(f"base degree {worst} exceeds the cap {MAX_DEGREE}", partial=worst)
    return CfiStructure(g, s)


def degree_failures(c: CfiStructure) -> list[Node]:
    """Nodes whose degree in the adjacency set differs from the count the gadget rules force.

    A gadget node v^X has one neighbour per incident edge. An edge node e_i has
    its twin plus every gadget node at either endpoint that selects bit i; at a
    degree-d endpoint there are 2^(d-2) of those for d >= 2, and for d = 1 one
    node exactly when i matches the endpoint's parity.
    """
    deg: dict = {}
    for pair in c.adjacency():
        for x in pair:
            deg[x] = deg.get(x, 0) + 1
    bad = []
    for x in c.nodes():
        if isinstance(x, GadgetNode):
            want = c.base.degree(x.vertex)
        else:
            want = 1
            for v in x.edge:
                d = c.base.degree(v)
                if d >= 2:
                    want += 1 << (d - 2)
                else:
                    want += int(x.bit == (1 if v in c.odd_set else 0))
        if deg.get(x, 0) != want:
            bad.append(x)
    return bad


def expected_node_count(g: BaseGraph) -> int:
    return 2 * len(g.edges) + sum(1 << (g.degree(v) - 1) for v in g.vertices)


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------


def _flip_edges(flip: EdgeFlip | Iterable[tuple]) -> frozenset:
    return flip.edges if isinstance(flip, EdgeFlip) else frozenset(flip)


def apply_flip(flip: EdgeFlip | Iterable[tuple], x: Node, g: BaseGraph) -> Node:
    f = _flip_edges(flip)
    if isinstance(x, EdgeNode):
        return EdgeNode(x.edge, x.bit ^ (x.edge in f))
    return GadgetNode(x.vertex, x.mask ^ local_mask(g, x.vertex, f))


def apply_flip_structure(flip: EdgeFlip | Iterable[tuple], c: CfiStructure) -> CfiStructure:
    f = _flip_edges(flip)
    odd = odd_degree_vertices(c.base, c.base.edge_bits(f))
    return build_cfi(c.base, c.odd_set ^ odd)


def apply_base_perm(pi: BasePerm, flip: EdgeFlip | Iterable[tuple], x: Node, g: BaseGraph) -> Node:
    """The semidirect action (ρ_F, π): flip by F, then relabel through π."""
    if not pi.is_automorphism(g):
        raise ValidationError("permutation is not an automorphism of the base graph")
    y = apply_flip(flip, x, g)
    if isinstance(y, EdgeNode):
        return EdgeNode(edge_action(pi, y.edge), y.bit)
    image = [edge_action(pi, e) for e in mask_edges(g, y.vertex, y.mask)]
    w = pi(y.vertex)
    return GadgetNode(w, local_mask(g, w, image))


def cfi_query(g: BaseGraph, odd_set: Iterable[Hashable]) -> str:
    """``"even"`` if the gadget parity system is solvable, else ``"odd"``."""
    s = frozenset(odd_set)
    rows = [g.edge_bits(g.incident(v)) for v in g.vertices]
    rhs = 0
    for i, v in enumerate(g.vertices):
        if v in s:
            rhs |= 1 << i
    solvable = solve_bits(rows, rhs, len(g.edges)) is not None
    answer = "even" if solvable else "odd"
    if (len(s) % 2 == 0) != solvable:
        raise ConsistencyError("linear system disagrees with the odd-set parity")
    return answer


def cfi_automorphism_flips(g: BaseGraph) -> F2Subspace:
    return cycle_space(g)


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------


def flip_with_odd_set(g: BaseGraph, target: Iterable[Hashable]) -> frozenset | None:
    """Some edge set whose odd-degree vertices are exactly ``target``."""
    t = frozenset(target)
    rows = [g.edge_bits(g.incident(v)) for v in g.vertices]
    rhs = 0
    for i, v in enumerate(g.vertices):
        if v in t:
            rhs |= 1 << i
    x = solve_bits(rows, rhs, len(g.edges))
    return None if x is None else g.edges_of_bits(x)


def maps_structure(c1: CfiStructure, c2: CfiStructure, pi: BasePerm, flip: frozenset) -> bool:
    """Check node-by-node and edge-by-edge that (ρ_F, π) maps c1 onto c2."""
    g = c1.base
    image = {x: apply_base_perm(pi, flip, x, g) for x in c1.nodes()}
    if set(image.values()) != set(c2.nodes()) or len(set(image.values())) != len(image):
        return False
    mapped = {frozenset(image[y] for y in pair) for pair in c1.adjacency()}
    return mapped == c2.adjacency()


def find_isomorphism(
    c1: CfiStructure, c2: CfiStructure, base_perms: Sequence[BasePerm] | None = None
) -> tuple[BasePerm, frozenset] | None:
    """Search the maps (ρ_F, π) for one carrying c1 onto c2.

    For each π the flip is forced up to the cycle space: it must have odd set
    S △ π⁻¹(R). A candidate is accepted only after an explicit check.
    """
    if c1.base != c2.base:
        raise ValidationError("structures have different base graphs")
    g = c1.base
    perms = list(base_perms) if base_perms is not None else [BasePerm.identity(g.vertices)]
    for pi in perms:
        inv = pi.inverse()
        pulled = frozenset(inv(v) for v in c2.odd_set)
        flip = flip_with_odd_set(g, c1.odd_set ^ pulled)
        if flip is None:
            continue
        if maps_structure(c1, c2, pi, flip):
            return pi, flip
        raise ConsistencyError("solved flip failed the explicit structure check")
    return None


def iter_flip_space(space: F2Subspace) -> Iterator[frozenset]:
    labels = space.ambient
    for bits in space.elements_bits():
        yield frozenset(labels[i] for i in range(len(labels)) if bits >> i & 1)
