"""Permutation groups by generators, orbits, stabilizers and alternating supporting partitions.

Permutations are tuples ``p`` over domain indices with ``p[i]`` the image of
point ``i``. Products compose right to left: ``(p * q)(x) = p(q(x))``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import ParameterError, ResourceLimitError, ValidationError

Perm = tuple

DEFAULT_GROUP_CAP = 10**6


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """``p ∘ q``: apply ``q`` first."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_even(p: Perm) -> bool:
    seen = [False] * len(p)
    transpositions = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        transpositions += length - 1
    return transpositions % 2 == 0


def cycle_perm(n: int, cycle: Sequence[int]) -> Perm:
    p = list(range(n))
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        p[a] = b
    return tuple(p)


def _check_perm(p: Sequence[int], n: int) -> Perm:
    p = tuple(p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise ValidationError(f"{p!r} is not a permutation of {n} points")
    return p


@dataclass(eq=False)
class PermGroup:
    """A permutation group on ``domain`` given by generators.

    The element list is computed on first use and cached.
    """

    domain: tuple
    generators: tuple
    cap: int = DEFAULT_GROUP_CAP
    _elements: list | None = field(default=None, repr=False)
    _element_set: frozenset | None = field(default=None, repr=False)
    _good_parts: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.domain = tuple(self.domain)
        if len(set(self.domain)) != len(self.domain):
            raise ValidationError("domain points must be distinct")
        n = len(self.domain)
        self.generators = tuple(_check_perm(g, n) for g in self.generators)

    # construction -----------------------------------------------------------

    @classmethod
    def from_cycles(cls, domain: Sequence[Hashable], cycles: Iterable[str], cap: int = DEFAULT_GROUP_CAP) -> "PermGroup":
        domain = tuple(domain)
        return cls(domain, tuple(parse_cycles(domain, c) for c in cycles), cap)

    @classmethod
    def from_elements(cls, domain: Sequence[Hashable], elements: Iterable[Perm], cap: int = DEFAULT_GROUP_CAP) -> "PermGroup":
        """Wrap a known closed element set; a small generating set is extracted greedily."""
        domain = tuple(domain)
        elems = sorted(set(elements))
        n = len(domain)
        gens: list[Perm] = []
        closure = {identity(n)}
        for g in elems:
            if g not in closure:
                gens.append(g)
                closure = set(_closure(n, gens, cap))
        if len(closure) != len(elems):
            raise ValidationError("element set is not closed under composition")
        grp = cls(domain, tuple(gens), cap)
        grp._elements = elems
        grp._element_set = frozenset(elems)
        return grp

    @classmethod
    def symmetric(cls, domain: Sequence[Hashable], cap: int = DEFAULT_GROUP_CAP) -> "PermGroup":
        n = len(tuple(domain))
        gens = [cycle_perm(n, [i, i + 1]) for i in range(n - 1)]
        return cls(tuple(domain), tuple(gens), cap)

    @classmethod
    def alternating(cls, domain: Sequence[Hashable], cap: int = DEFAULT_GROUP_CAP) -> "PermGroup":
        n = len(tuple(domain))
        gens = [cycle_perm(n, [0, 1, i]) for i in range(2, n)]
        return cls(tuple(domain), tuple(gens), cap)

    @property
    def degree(self) -> int:
        return len(self.domain)

    def point_index(self, point: Hashable) -> int:
        return self.domain.index(point)

    # enumeration ------------------------------------------------------------

    def enumerate(self, cap: int | None = None) -> list[Perm]:
        if self._elements is None:
            self._elements = _closure(self.degree, self.generators, self.cap if cap is None else cap)
            self._element_set = frozenset(self._elements)
        elif cap is not None and len(self._elements) > cap:
            raise ResourceLimitError(f"group order exceeds cap {cap}", partial=len(self._elements))
        return self._elements

    def order(self) -> int:
        return len(self.enumerate())

    def contains(self, p: Perm) -> bool:
        self.enumerate()
        assert self._element_set is not None
        return tuple(p) in self._element_set

    def __contains__(self, p: Perm) -> bool:
        return self.contains(p)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def conjugate(self, sigma: Perm) -> "PermGroup":
        """σGσ⁻¹."""
        sinv = inverse(sigma)
        return PermGroup(self.domain, tuple(compose(sigma, compose(g, sinv)) for g in self.generators), self.cap)

    # orbits -----------------------------------------------------------------

    def orbit(self, x: Hashable, action: Callable[[Perm, Hashable], Hashable] | None = None) -> set:
        act = action or point_action
        seen = {x}
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g in self.generators:
                z = act(g, y)
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
        return seen

    def stabilizer(self, x: Hashable, action: Callable[[Perm, Hashable], Hashable] | None = None) -> "PermGroup":
        act = action or point_action
        return PermGroup.from_elements(self.domain, (g for g in self.enumerate() if act(g, x) == x), self.cap)

    # alternating supporting partitions --------------------------------------

    def part_is_good(self, part: frozenset) -> bool:
        """Whether Sym(part) (size < 5) or Alt(part) (size >= 5) lies in the group."""
        if len(part) <= 1:
            return True
        cached = self._good_parts.get(part)
        if cached is None:
            cached = all(self.contains(g) for g in part_group_generators(self.degree, part))
            self._good_parts[part] = cached
        return cached


def _closure(n: int, gens: Sequence[Perm], cap: int) -> list[Perm]:
    start = identity(n)
    seen = {start}
    out = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                out.append(y)
                if len(out) > cap:
                    raise ResourceLimitError(f"group order exceeds cap {cap}", partial=len(out))
                queue.append(y)
    return out


def point_action(p: Perm, x: int) -> int:
    return p[x]


def set_action(p: Perm, s: frozenset) -> frozenset:
    return frozenset(p[i] for i in s)


def partition_action(p: Perm, parts: frozenset) -> frozenset:
    return frozenset(frozenset(p[i] for i in part) for part in parts)


def index(g: PermGroup, h: PermGroup) -> int:
    """[G : H] for H ≤ G."""
    if not h.is_subgroup_of(g):
        raise ValidationError("H is not a subgroup of G")
    go, ho = g.order(), h.order()
    return go // ho


_TOKEN = re.compile(r"\(([^()]*)\)")


def parse_cycles(domain: Sequence[Hashable], text: str) -> Perm:
    """Parse cycle notation such as ``"(1 2)(3 4 5)"`` over labelled points."""
    domain = tuple(domain)
    lookup = {str(x): i for i, x in enumerate(domain)}
    n = len(domain)
    p = list(range(n))
    if _TOKEN.sub("", text).strip():
        raise ParameterError(f"malformed cycle notation {text!r}")
    for body in _TOKEN.findall(text):
        pts = [t for t in re.split(r"[\s,]+", body.strip()) if t]
        try:
            idx = [lookup[t] for t in pts]
        except KeyError as exc:
            raise ParameterError(f"unknown point {exc.args[0]!r} in {text!r}") from None
        if len(set(idx)) != len(idx):
            raise ParameterError(f"repeated point in cycle {body!r}")
        q = cycle_perm(n, idx) if len(idx) > 1 else identity(n)
        p = list(compose(tuple(p), q))
    return tuple(p)


def format_cycles(domain: Sequence[Hashable], p: Perm) -> str:
    seen = set()
    chunks = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = []
        j = i
        while j not in seen:
            seen.add(j)
            cyc.append(str(domain[j]))
            j = p[j]
        chunks.append("(" + " ".join(cyc) + ")")
    return "".join(chunks) or "()"


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty point sets covering a domain, stored canonically."""

    parts: tuple

    def __post_init__(self) -> None:
        canon = tuple(sorted((tuple(sorted(p, key=repr)) for p in self.parts), key=lambda t: (len(t), repr(t))))
        seen: set = set()
        for part in canon:
            if not part:
                raise ValidationError("partition parts must be nonempty")
            if seen & set(part):
                raise ValidationError("partition parts must be disjoint")
            seen |= set(part)
        object.__setattr__(self, "parts", canon)

    @classmethod
    def of(cls, parts: Iterable[Iterable[Hashable]]) -> "Partition":
        return cls(tuple(tuple(p) for p in parts))

    def points(self) -> frozenset:
        return frozenset(x for p in self.parts for x in p)

    def as_sets(self) -> frozenset:
        return frozenset(frozenset(p) for p in self.parts)

    def size_profile(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[len(p)] = out.get(len(p), 0) + 1
        return dict(sorted(out.items()))

    def refines(self, other: "Partition") -> bool:
        owner = {x: i for i, p in enumerate(other.parts) for x in p}
        return all(len({owner[x] for x in p}) == 1 for p in self.parts)

    def map(self, f: Callable[[Hashable], Hashable]) -> "Partition":
        return Partition.of([f(x) for x in p] for p in self.parts)

    def __len__(self) -> int:
        return len(self.parts)


def part_group_generators(n: int, part: Iterable[int]) -> list[Perm]:
    """Generators of Sym(part) if |part| < 5, else of Alt(part)."""
    pts = sorted(part)
    if len(pts) <= 1:
        return []
    if len(pts) < 5:
        return [cycle_perm(n, [pts[i], pts[i + 1]]) for i in range(len(pts) - 1)]
    return [cycle_perm(n, [pts[0], pts[1], pts[i]]) for i in range(2, len(pts))]


def _index_partition(g: PermGroup, p: Partition) -> list[frozenset]:
    lookup = {x: i for i, x in enumerate(g.domain)}
    if p.points() != frozenset(g.domain):
        raise ValidationError("partition does not cover the group's domain")
    return [frozenset(lookup[x] for x in part) for part in p.parts]


def _label_partition(g: PermGroup, parts: Iterable[Iterable[int]]) -> Partition:
    return Partition.of([g.domain[i] for i in part] for part in parts)


def is_alt_supporting(p: Partition, g: PermGroup) -> bool:
    return all(g.part_is_good(part) for part in _index_partition(g, p))


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All set partitions of range(n) via restricted growth strings."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i: int, m: int) -> Iterator[list[list[int]]]:
        if i == n:
            parts: list[list[int]] = [[] for _ in range(m)]
            for x, b in enumerate(labels):
                parts[b].append(x)
            yield parts
            return
        for b in range(m + 1):
            labels[i] = b
            yield from rec(i + 1, max(m, b + 1))

    labels[0] = 0
    yield from rec(1, 1)


EXHAUSTIVE_LIMIT = 9


def supporting_partitions(g: PermGroup) -> list[Partition]:
    """Every alternating supporting partition, by scanning the partition lattice."""
    n = g.degree
    if n > EXHAUSTIVE_LIMIT:
        raise ResourceLimitError(f"exhaustive scan limited to {EXHAUSTIVE_LIMIT} points", partial=n)
    out = []
    for parts in set_partitions(n):
        if all(g.part_is_good(frozenset(p)) for p in parts):
            out.append(_label_partition(g, parts))
    return out


def _exhaustive_coarsest(g: PermGroup) -> Partition:
    candidates = supporting_partitions(g)
    coarsest = min(candidates, key=len)
    for c in candidates:
        if not c.refines(coarsest):
            raise AssertionError("supporting partitions have no unique coarsest element")
    return coarsest


def _merge_coarsest(g: PermGroup, max_union: int = 5) -> Partition:
    parts = [frozenset([i]) for i in range(g.degree)]
    merged = True
    while merged:
        merged = False
        for k in range(2, min(max_union, len(parts)) + 1):
            for combo in itertools.combinations(range(len(parts)), k):
                union = frozenset().union(*(parts[i] for i in combo))
                if g.part_is_good(union):
                    parts = [p for i, p in enumerate(parts) if i not in combo] + [union]
                    parts.sort(key=min)
                    merged = True
                    break
            if merged:
                break
    return _label_partition(g, parts)


@dataclass(frozen=True)
class SpaResult:
    partition: Partition
    certified: bool
    engine: str

    @property
    def heuristic(self) -> bool:
        return not self.certified


def alt_supporting_partition(g: PermGroup, engine: str = "auto") -> SpaResult:
    """Coarsest alternating supporting partition with its certification status.

    ``engine`` is ``exhaustive``, ``merge`` or ``auto`` (exhaustive up to nine
    points, merge beyond). When both run their results must agree.
    """
    if engine not in ("auto", "exhaustive", "merge"):
        raise ParameterError(f"unknown engine {engine!r}")
    if engine == "merge" or (engine == "auto" and g.degree > EXHAUSTIVE_LIMIT):
        return SpaResult(_merge_coarsest(g), certified=False, engine="merge")
    exact = _exhaustive_coarsest(g)
    return SpaResult(exact, certified=True, engine="exhaustive")


def coarsest_alt_supporting_partition(g: PermGroup, engine: str = "auto") -> Partition:
    return alt_supporting_partition(g, engine).partition


def partition_join(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening: connected components of overlapping parts."""
    parent: dict = {}

    def find(x: Hashable) -> Hashable:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in p.points() | q.points():
        parent[x] = x
    for part in p.parts + q.parts:
        for x in part[1:]:
            a, b = find(part[0]), find(x)
            if a != b:
                parent[a] = b
    groups: dict = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return Partition.of(groups.values())


def partition_stabilizes(g: PermGroup, p: Partition) -> bool:
    """Whether every element of the group maps parts of ``p`` to parts."""
    parts = _index_partition(g, p)
    target = frozenset(parts)
    return all(partition_action(x, target) == target for x in g.generators)


def sandwich_check(g: PermGroup) -> bool:
    spa = coarsest_alt_supporting_partition(g)
    return is_alt_supporting(spa, g) and partition_stabilizes(g, spa)


def conjugate_partition_check(g: PermGroup, sigma: Perm) -> bool:
    sigma = _check_perm(sigma, g.degree)
    lhs = coarsest_alt_supporting_partition(g).map(lambda x: g.domain[sigma[g.point_index(x)]])
    rhs = coarsest_alt_supporting_partition(g.conjugate(sigma))
    return lhs == rhs


def partition_shape(p: Partition) -> str:
    sizes = sorted(len(part) for part in p.parts)
    if len(sizes) == 1:
        return "whole"
    if all(s == 1 for s in sizes):
        return "singletons"
    if len(sizes) == 2 and sizes[0] == 1:
        return "one-vs-rest"
    return "other"


def alt_partition_orbit_size(p: Partition, n: int) -> tuple[int, str]:
    """Orbit size of a partition of ``n`` points under Alt_n, and its shape.

    For n >= 2 the setwise stabilizer in Sym_n always holds a transposition
    (inside a part of size >= 2, or swapping two singletons), so the Alt_n
    orbit equals the Sym_n orbit n! / prod(m_s! * (s!)^{m_s}).
    """
    if n < 1:
        raise ParameterError("n must be positive")
    if sum(len(part) for part in p.parts) != n:
        raise ValidationError("partition must cover n points")
    counts = p.size_profile()
    denom = 1
    for s, m in counts.items():
        denom *= math.factorial(m) * math.factorial(s) ** m
    size = math.factorial(n) // denom
    if n == 1:
        size = 1
    return size, partition_shape(p)


def alt_partition_orbit_bruteforce(p: Partition, n: int) -> int:
    """Orbit size by applying every even permutation of the points."""
    pts = sorted(p.points(), key=repr)
    idx = {x: i for i, x in enumerate(pts)}
    start = frozenset(frozenset(idx[x] for x in part) for part in p.parts)
    images = set()
    for q in itertools.permutations(range(n)):
        if is_even(q):
            images.add(partition_action(q, start))
    return len(images)


def orbit_trichotomy_holds(p: Partition, n: int) -> bool:
    """Whole, singleton and one-vs-rest partitions have Alt_n orbit 1 or n; every
    other shape has orbit at least n(n-1)/4 (the constant is tight at n = 4)."""
    if n < 4:
        raise ParameterError("the orbit classification needs n >= 4")
    size, shape = alt_partition_orbit_size(p, n)
    if shape == "other":
        return 4 * size >= n * (n - 1)
    return size in (1, n)
