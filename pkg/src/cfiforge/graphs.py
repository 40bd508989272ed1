"""Base graphs for the CFI construction, hypercubes, cycle spaces and base symmetries."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import ParameterError, ResourceLimitError, ValidationError
from .f2 import F2Subspace
from .labels import from_jsonable, serialize, sort_labels, to_jsonable

Vertex = Hashable
Edge = tuple


def canonical_edge(u: Vertex, v: Vertex) -> Edge:
    """Edge identity: the endpoint pair sorted by the global comparator."""
    return (u, v) if serialize(u) <= serialize(v) else (v, u)


@dataclass(frozen=True, eq=False)
class BaseGraph:
    """Connected simple undirected graph with a fixed vertex and edge order."""

    vertices: tuple
    edges: tuple
    _incident: dict = field(init=False, repr=False, compare=False)
    _edge_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        verts = tuple(sort_labels(set(self.vertices)))
        if len(verts) != len(self.vertices):
            raise ValidationError("duplicate vertex ids")
        vset = set(verts)
        canon = []
        for e in self.edges:
            if len(e) != 2:
                raise ValidationError(f"edge {e!r} is not a pair")
            u, v = e
            if u == v:
                raise ValidationError(f"self-loop at {u!r}")
            if u not in vset or v not in vset:
                raise ValidationError(f"edge {e!r} has an unknown endpoint")
            canon.append(canonical_edge(u, v))
        if len(set(canon)) != len(canon):
            raise ValidationError("multi-edges are not allowed")
        edges = tuple(sort_labels(canon))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        incident: dict = {v: [] for v in verts}
        for e in edges:
            incident[e[0]].append(e)
            incident[e[1]].append(e)
        object.__setattr__(self, "_incident", {v: tuple(es) for v, es in incident.items()})
        object.__setattr__(self, "_edge_index", {e: i for i, e in enumerate(edges)})
        if verts and not self._connected():
            raise ValidationError("base graph must be connected")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BaseGraph) and self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def _connected(self) -> bool:
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    def incident(self, v: Vertex) -> tuple:
        """E(v) in global edge order."""
        return self._incident[v]

    def degree(self, v: Vertex) -> int:
        return len(self._incident[v])

    def neighbors(self, v: Vertex) -> list:
        return [e[1] if e[0] == v else e[0] for e in self._incident[v]]

    def edge_index(self, e: Edge) -> int:
        return self._edge_index[e]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return canonical_edge(u, v) in self._edge_index

    def edge_bits(self, edges: Iterable[Edge]) -> int:
        bits = 0
        for e in edges:
            bits |= 1 << self._edge_index[e]
        return bits

    def edges_of_bits(self, bits: int) -> frozenset:
        return frozenset(e for i, e in enumerate(self.edges) if bits >> i & 1)

    # io ---------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [to_jsonable(v) for v in self.vertices],
            "edges": [[to_jsonable(u), to_jsonable(v)] for u, v in self.edges],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "BaseGraph":
        verts = [from_jsonable(v) for v in obj["vertices"]]
        edges = [(from_jsonable(u), from_jsonable(v)) for u, v in obj["edges"]]
        return cls(tuple(verts), tuple(edges))

    def to_dot(self) -> str:
        lines = ["graph base {"]
        for v in self.vertices:
            lines.append(f"  {json.dumps(str(v))};")
        for u, v in self.edges:
            lines.append(f"  {json.dumps(str(u))} -- {json.dumps(str(v))};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def make_graph(vertices: Iterable[Vertex], edges: Iterable[Sequence[Vertex]]) -> BaseGraph:
    return BaseGraph(tuple(vertices), tuple(tuple(e) for e in edges))


def hypercube(n: int) -> BaseGraph:
    """The n-cube on fixed-width binary strings."""
    if not 1 <= n <= 16:
        raise ParameterError("hypercube dimension must be in 1..16")
    verts = [format(i, f"0{n}b") for i in range(1 << n)]
    edges = []
    for i in range(1 << n):
        for b in range(n):
            j = i ^ (1 << b)
            if i < j:
                edges.append((verts[i], verts[j]))
    return BaseGraph(tuple(verts), tuple(edges))


def path_graph(k: int) -> BaseGraph:
    """Path with k edges on vertices 0..k."""
    if k < 1:
        raise ParameterError("path needs at least one edge")
    return make_graph(range(k + 1), [(i, i + 1) for i in range(k)])


def cycle_graph(k: int) -> BaseGraph:
    """Cycle with k >= 3 edges on vertices 0..k-1."""
    if k < 3:
        raise ParameterError("cycle needs at least three edges")
    return make_graph(range(k), [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k: int) -> BaseGraph:
    if k < 2:
        raise ParameterError("complete graph needs at least two vertices")
    return make_graph(range(k), [(i, j) for i in range(k) for j in range(i + 1, k)])


def parse_base(spec: str) -> BaseGraph:
    """Parse ``hypercube:3``, ``path:4``, ``cycle:6`` or ``complete:4``."""
    kind, _, arg = spec.partition(":")
    builders = {"hypercube": hypercube, "path": path_graph, "cycle": cycle_graph, "complete": complete_graph}
    if kind not in builders or not arg.isdigit():
        raise ParameterError(f"unknown base graph {spec!r}")
    return builders[kind](int(arg))


def cycle_space(g: BaseGraph) -> F2Subspace:
    """Fundamental cycles of a BFS spanning tree, canonicalized."""
    root = g.vertices[0]
    path_to_root = {root: 0}
    queue = deque([root])
    tree = 0
    while queue:
        v = queue.popleft()
        for e in g.incident(v):
            w = e[1] if e[0] == v else e[0]
            if w not in path_to_root:
                bit = 1 << g.edge_index(e)
                path_to_root[w] = path_to_root[v] ^ bit
                tree |= bit
                queue.append(w)
    cycles = []
    for i, (u, v) in enumerate(g.edges):
        if not tree >> i & 1:
            cycles.append(path_to_root[u] ^ path_to_root[v] ^ (1 << i))
    return F2Subspace.from_bits(g.edges, cycles)


def odd_degree_vertices(g: BaseGraph, flip_bits: int) -> frozenset:
    """Vertices incident to an odd number of edges of the flip set."""
    out = []
    for v in g.vertices:
        c = 0
        for e in g.incident(v):
            c ^= flip_bits >> g.edge_index(e) & 1
        if c:
            out.append(v)
    return frozenset(out)


@dataclass(frozen=True)
class BasePerm:
    """A bijection of base vertices. Stored as a sorted item tuple so it hashes."""

    items: tuple
    _map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        m = dict(self.items)
        if len(m) != len(self.items) or set(m) != set(m.values()):
            raise ValidationError("base permutation must be a bijection")
        object.__setattr__(self, "_map", m)

    @classmethod
    def from_mapping(cls, mapping: Mapping[Vertex, Vertex]) -> "BasePerm":
        return cls(tuple(sorted(mapping.items(), key=lambda kv: serialize(kv[0]))))

    @classmethod
    def identity(cls, vertices: Iterable[Vertex]) -> "BasePerm":
        return cls.from_mapping({v: v for v in vertices})

    @property
    def mapping(self) -> dict:
        return self._map

    def __call__(self, v: Vertex) -> Vertex:
        return self._map.get(v, v)

    def compose(self, other: "BasePerm") -> "BasePerm":
        """``self ∘ other``: apply ``other`` first."""
        a, b = self.mapping, other.mapping
        return BasePerm.from_mapping({v: a.get(b[v], b[v]) for v in b})

    def inverse(self) -> "BasePerm":
        return BasePerm.from_mapping({w: v for v, w in self.items})

    def is_automorphism(self, g: BaseGraph) -> bool:
        m = self.mapping
        if set(m) != set(g.vertices):
            return False
        return all(g.has_edge(m[u], m[v]) for u, v in g.edges)


def _check_auto(pi: BasePerm, g: BaseGraph) -> None:
    if not pi.is_automorphism(g):
        raise ValidationError("permutation is not an automorphism of the base graph")


def edge_action(pi: BasePerm, e: Edge, g: BaseGraph | None = None) -> Edge:
    if g is not None:
        _check_auto(pi, g)
    m = pi.mapping
    return canonical_edge(m[e[0]], m[e[1]])


def induced_edge_perm(pi: BasePerm, g: BaseGraph) -> tuple[int, ...]:
    """Image index of every edge index under the induced action on E."""
    _check_auto(pi, g)
    m = pi.mapping
    return tuple(g.edge_index(canonical_edge(m[u], m[v])) for u, v in g.edges)


def position_perm_of_hypercube(n: int, positions: Sequence[int]) -> BasePerm:
    """Sym_n element acting on n-bit strings.

    ``positions[i]`` is the 0-based image of coordinate ``i``, and the string
    action is ``π(v)_j = v_{π^{-1}(j)}``.
    """
    inv = [0] * n
    for i, p in enumerate(positions):
        inv[p] = i
    m = {}
    for x in range(1 << n):
        s = format(x, f"0{n}b")
        m[s] = "".join(s[inv[j]] for j in range(n))
    return BasePerm.from_mapping(m)


def bitflip_of_hypercube(n: int, coordinate: int) -> BasePerm:
    """Translation flipping the given 1-based coordinate."""
    m = {}
    for x in range(1 << n):
        s = format(x, f"0{n}b")
        c = coordinate - 1
        m[s] = s[:c] + ("1" if s[c] == "0" else "0") + s[c + 1:]
    return BasePerm.from_mapping(m)


def hypercube_symmetry_generators(n: int, translations: bool = False) -> list[BasePerm]:
    """Adjacent coordinate transpositions, plus the coordinate-1 bitflip if requested."""
    if not 1 <= n <= 16:
        raise ParameterError("hypercube dimension must be in 1..16")
    gens = []
    for i in range(n - 1):
        pos = list(range(n))
        pos[i], pos[i + 1] = pos[i + 1], pos[i]
        gens.append(position_perm_of_hypercube(n, pos))
    if translations:
        gens.append(bitflip_of_hypercube(n, 1))
    return gens


def close_base_perms(generators: Sequence[BasePerm], vertices: Iterable[Vertex], cap: int = 10**6) -> list[BasePerm]:
    """All elements of the group generated by ``generators``, identity first."""
    start = BasePerm.identity(vertices)
    seen = {start}
    out = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for gen in generators:
            y = gen.compose(x)
            if y not in seen:
                seen.add(y)
                out.append(y)
                if len(out) > cap:
                    raise ResourceLimitError(f"base group exceeds cap {cap}", partial=len(out))
                queue.append(y)
    return out


def graph_automorphisms(g: BaseGraph, cap: int = 10**5) -> list[BasePerm]:
    """All automorphisms of a small base graph by degree-pruned backtracking, identity first."""
    verts = list(g.vertices)
    order = sorted(verts, key=lambda v: (-g.degree(v), serialize(v)))
    out: list[BasePerm] = []
    image: dict = {}
    used: set = set()

    def rec(i: int) -> None:
        if i == len(order):
            out.append(BasePerm.from_mapping(image))
            if len(out) > cap:
                raise ResourceLimitError(f"automorphism count exceeds cap {cap}", partial=len(out))
            return
        v = order[i]
        for w in verts:
            if w in used or g.degree(w) != g.degree(v):
                continue
            if all(g.has_edge(w, image[u]) == g.has_edge(v, u) for u in order[:i]):
                image[v] = w
                used.add(w)
                rec(i + 1)
                del image[v]
                used.discard(w)

    rec(0)
    ident = BasePerm.identity(verts)
    out.sort(key=lambda p: p != ident)
    return out
