"""Symmetric XOR circuits under Sym_n: automorphism groups, gate stabilizers and their
alternating supporting partitions, orbit profiles of root paths, and the halved hypercube."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from .errors import ConsistencyError, ParameterError, ResourceLimitError, ValidationError
from .graphs import canonical_edge
from .labels import display
from .perm import Partition, PermGroup, Perm, SpaResult, alt_supporting_partition, compose
from .xorcircuit import XorCircuit, enumerate_paths, extensions, path_counts

DEFAULT_GATE_CAP = 5000
DEFAULT_PATH_CAP = 10**6

BaseAction = Callable[[Perm, Hashable], Hashable]


# ---------------------------------------------------------------------------
# label actions of Sym_n
# ---------------------------------------------------------------------------


def coordinate_action(p: Perm, label: Hashable) -> Hashable:
    """Move character i of a bit string to position p[i]; edges map endpoint-wise."""
    if isinstance(label, str):
        out = [""] * len(label)
        for i, ch in enumerate(label):
            out[p[i]] = ch
        return "".join(out)
    if isinstance(label, tuple) and len(label) == 2:
        return canonical_edge(coordinate_action(p, label[0]), coordinate_action(p, label[1]))
    raise ValidationError(f"label {label!r} is neither a bit string nor an edge")


def coordinate_group(n: int) -> PermGroup:
    """Sym_n on coordinates named 1..n."""
    return PermGroup.symmetric(tuple(range(1, n + 1)))


# ---------------------------------------------------------------------------
# circuit automorphisms
# ---------------------------------------------------------------------------


@dataclass
class CircuitAutGroup:
    """Pairs (σ, π): σ permutes gate indices, fixes the root, keeps wires, and
    maps a leaf labelled ℓ to a leaf labelled π(ℓ)."""

    circuit: XorCircuit
    base_group: PermGroup
    pairs: tuple
    _by_gate: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.pairs)

    def gate_index(self, g: Hashable) -> int:
        return self.circuit._index[g]

    def fixing(self, g: Hashable) -> list[tuple]:
        """Pairs whose σ fixes g."""
        i = self.gate_index(g)
        hit = self._by_gate.get(i)
        if hit is None:
            hit = [(s, p) for s, p in self.pairs if s[i] == i]
            self._by_gate[i] = hit
        return hit

    def gate_orbit(self, g: Hashable) -> frozenset:
        i = self.gate_index(g)
        return frozenset(self.circuit.gates[s[i]] for s, _ in self.pairs)

    def is_closed(self) -> bool:
        members = set(self.pairs)
        for s1, p1 in self.pairs:
            for s2, p2 in self.pairs:
                if (tuple(s1[j] for j in s2), compose(p1, p2)) not in members:
                    return False
        return True


def circuit_automorphisms(
    c: XorCircuit, base_group: PermGroup, label_action: BaseAction = coordinate_action, cap: int = DEFAULT_GATE_CAP
) -> CircuitAutGroup:
    """Every extension σ of every π in the base group, by refinement and backtracking."""
    if c.size() > cap:
        raise ResourceLimitError(f"circuit has {c.size()} gates, cap is {cap}", partial=c.size())
    pairs = []
    for p in base_group.enumerate():
        for sigma in extensions(c, lambda lab, p=p: label_action(p, lab)):
            pairs.append((tuple(sigma), p))
    return CircuitAutGroup(c, base_group, tuple(pairs))


# ---------------------------------------------------------------------------
# gate stabilizers and size profiles
# ---------------------------------------------------------------------------


def gate_base_stabilizer(c: XorCircuit, aut: CircuitAutGroup, g: Hashable) -> PermGroup:
    """Stab_n(g): base permutations extending to an automorphism that fixes g."""
    return PermGroup.from_elements(aut.base_group.domain, {p for _, p in aut.fixing(g)})


def gate_spa(c: XorCircuit, aut: CircuitAutGroup, g: Hashable, engine: str = "auto") -> SpaResult:
    return alt_supporting_partition(gate_base_stabilizer(c, aut, g), engine)


@dataclass(frozen=True)
class SizeProfile:
    """ζ: part size → number of parts of that size."""

    counts: tuple

    @classmethod
    def of(cls, p: Partition) -> "SizeProfile":
        return cls(tuple(sorted(Counter(len(part) for part in p.parts).items())))

    def __getitem__(self, size: int) -> int:
        return dict(self.counts).get(size, 0)

    def domain_size(self) -> int:
        return sum(s * k for s, k in self.counts)

    def tail(self, s: int) -> int:
        """Σ_{i ≥ s} ζ(i)."""
        return sum(k for size, k in self.counts if size >= s)

    def large_parts(self, threshold: float) -> int:
        return sum(k for size, k in self.counts if size >= threshold)


def size_profile(c: XorCircuit, aut: CircuitAutGroup, g: Hashable) -> SizeProfile:
    prof = SizeProfile.of(gate_spa(c, aut, g).partition)
    if prof.domain_size() != aut.base_group.degree:
        raise ConsistencyError("size profile does not cover the base domain")
    return prof


def spa_transport_failures(c: XorCircuit, aut: CircuitAutGroup) -> list[tuple]:
    """Pairs (gate, σ-index) where SP_A(σg) ≠ π(SP_A(g))."""
    dom = aut.base_group.domain
    spa = {g: gate_spa(c, aut, g).partition for g in c.gates}
    bad = []
    for k, (s, p) in enumerate(aut.pairs):
        for i, g in enumerate(c.gates):
            moved = spa[g].map(lambda x: dom[p[dom.index(x)]])
            if moved != spa[c.gates[s[i]]]:
                bad.append((g, k))
    return bad


# ---------------------------------------------------------------------------
# orbits along wires and orbit profiles
# ---------------------------------------------------------------------------


def _check_wire(c: XorCircuit, parent: Hashable, child: Hashable) -> None:
    if child not in c.children(parent):
        raise ValidationError(f"{parent!r} is not a parent of {child!r}")


def parent_child_orbits(c: XorCircuit, aut: CircuitAutGroup, g: Hashable, h: Hashable) -> tuple[frozenset, frozenset]:
    """(Orbit_(g)(h), Orbit_(h)(g)) for a parent h of g."""
    _check_wire(c, h, g)
    gi, hi = aut.gate_index(g), aut.gate_index(h)
    up = frozenset(c.gates[s[hi]] for s, _ in aut.fixing(g))
    down = frozenset(c.gates[s[gi]] for s, _ in aut.fixing(h))
    if not up <= set(c.parents(g)) or not down <= set(c.children(h)):
        raise ConsistencyError("orbit left the wire neighbourhood")
    return up, down


def _orbit_class(c: XorCircuit, aut: CircuitAutGroup, g: Hashable, h: Hashable) -> tuple:
    """Canonical id of Orbit(Orbit_(g)(h)) and a check that it is well defined."""
    up, _ = parent_child_orbits(c, aut, g, h)
    idx = [aut.gate_index(x) for x in up]
    gi = aut.gate_index(g)
    images: dict[int, set] = {}
    for s, _ in aut.pairs:
        images.setdefault(s[gi], set()).add(tuple(sorted(s[j] for j in idx)))
    for target, seen in images.items():
        if len(seen) != 1:
            raise ConsistencyError("orbit of orbits is not unique at an image gate")
    return min((t, next(iter(seen))) for t, seen in images.items())


def orbit_profile(c: XorCircuit, aut: CircuitAutGroup, path: Sequence[Hashable]) -> tuple:
    """Ω(P) for P = (root = h_1, …, h_ℓ), listed from the end of the path."""
    if not path or path[0] != c.root:
        raise ValidationError("path must start at the root")
    for a, b in zip(path, path[1:]):
        _check_wire(c, a, b)
    return tuple(_orbit_class(c, aut, path[i], path[i - 1]) for i in range(len(path) - 1, 0, -1))


def profile_product(c: XorCircuit, aut: CircuitAutGroup, path: Sequence[Hashable]) -> int:
    out = 1
    for i in range(1, len(path)):
        out *= len(parent_child_orbits(c, aut, path[i], path[i - 1])[0])
    return out


def count_paths_with_profile(
    c: XorCircuit, aut: CircuitAutGroup, profile: tuple, target: Hashable, limit: int = DEFAULT_PATH_CAP
) -> int:
    """Paths from the root to ``target`` with orbit profile ``profile``.

    The count is the explicit enumeration; it must equal the product of the
    orbit sizes along any one such path.
    """
    paths = [p for p in enumerate_paths(c, target, limit) if orbit_profile(c, aut, p) == profile]
    if paths and profile_product(c, aut, paths[0]) != len(paths):
        raise ConsistencyError("orbit-size product disagrees with path enumeration")
    return len(paths)


def profile_classes(c: XorCircuit, aut: CircuitAutGroup, target: Hashable, limit: int = DEFAULT_PATH_CAP) -> Counter:
    """Number of root paths to ``target`` per orbit profile."""
    return Counter(orbit_profile(c, aut, p) for p in enumerate_paths(c, target, limit))


# ---------------------------------------------------------------------------
# the halved hypercube
# ---------------------------------------------------------------------------


def halved_hypercube_circuit(n: int) -> XorCircuit:
    """Strings of weight ≤ ⌈n/2⌉; wires add a single one; the middle slice is the input layer."""
    if not 2 <= n <= 20:
        raise ParameterError("halved hypercube dimension must be in 2..20")
    top = -(-n // 2)
    gates = [format(i, f"0{n}b") for i in range(1 << n) if i.bit_count() <= top]
    wires = set()
    labels = {}
    for v in gates:
        w = v.count("1")
        if w == top:
            labels[v] = v
            continue
        for j, ch in enumerate(v):
            if ch == "0":
                wires.add((v, v[:j] + "1" + v[j + 1:]))
    return XorCircuit(tuple(gates), frozenset(wires), "0" * n, labels)


# ---------------------------------------------------------------------------
# the even-path audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairAudit:
    child: Hashable
    parent: Hashable
    delta: tuple
    up_orbit: int
    down_orbit: int
    violations: tuple
    shape_notes: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class GateAudit:
    gate: Hashable
    profile: SizeProfile
    paths: int
    even: bool
    witnesses: tuple
    monotone: bool


@dataclass
class EvenPathReport:
    epsilon: float
    gates: list
    pairs: list
    heuristic: bool

    @property
    def passed(self) -> bool:
        return all(g.even and g.monotone for g in self.gates) and all(p.ok for p in self.pairs)

    @property
    def audited(self) -> int:
        return len(self.gates)

    def csv_rows(self) -> list[list[str]]:
        rows = [["gate", "profile", "paths", "parity"]]
        for g in self.gates:
            prof = ";".join(f"{s}:{k}" for s, k in g.profile.counts)
            rows.append([display(g.gate), prof, str(g.paths), "even" if g.even else "odd"])
        return rows


def delta_violations(delta: dict, threshold: float, up_orbit: int) -> tuple[list[str], list[str]]:
    """Check the part-size difference Δ of one wire for sizes s ≥ threshold.

    Returns (violations, shape_notes). Violations cover |Δ(s)| ≤ 2 and the
    parity implications that force an even parent orbit. Shape notes cover
    the neighbour pattern of non-zero entries, which only settles once every
    part crossing the threshold is large; they are reported, not enforced.
    """
    bad: list[str] = []
    notes: list[str] = []
    d = lambda s: delta.get(s, 0)  # noqa: E731
    odd_orbit = up_orbit % 2 == 1
    sizes = sorted(s for s in delta if s >= threshold)
    has_two = any(abs(d(s)) == 2 for s in sizes)
    for s in sizes:
        v = d(s)
        if abs(v) > 2:
            bad.append(f"|Δ({s})| = {abs(v)} > 2")
        if v == 2:
            if d(s + 1) != -1 or d(s - 1) != -1:
                notes.append(f"Δ({s}) = 2 without -1 on both sides")
            if s % 2 == 1 and odd_orbit:
                bad.append(f"Δ({s}) = 2 at odd s with odd parent orbit")
        if v == -2:
            if d(s + 1) != 1 or d(s - 1) != 1:
                notes.append(f"Δ({s}) = -2 without +1 on both sides")
            if s % 2 == 0 and odd_orbit:
                bad.append(f"Δ({s}) = -2 at even s with odd parent orbit")
        if not has_two and v == 1:
            if d(s - 1) != -1 and d(s + 1) != -1:
                notes.append(f"Δ({s}) = 1 without a -1 neighbour")
            if s % 2 == 1 and d(s + 1) == -1 and odd_orbit:
                bad.append(f"Δ({s}) = 1, Δ({s + 1}) = -1 at odd s with odd parent orbit")
        if not has_two and v == -1:
            if d(s - 1) != 1 and d(s + 1) != 1:
                notes.append(f"Δ({s}) = -1 without a +1 neighbour")
            if s % 2 == 0 and d(s - 1) == 1 and odd_orbit:
                bad.append(f"Δ({s}) = -1, Δ({s - 1}) = 1 at even s with odd parent orbit")
    nonzero = [s for s in sizes if d(s)]
    if nonzero and max(nonzero) - min(nonzero) > 2:
        notes.append("Δ is non-zero on sizes more than two apart")
    return bad, notes


def even_path_audit(c: XorCircuit, aut: CircuitAutGroup, epsilon: float, limit: int = DEFAULT_PATH_CAP) -> EvenPathReport:
    """Audit every gate whose SP_A has at least two parts of size ≥ εn.

    Each audited gate must have an even number of root paths. Along every
    path the first even parent orbit is recorded as a witness, the tail sums
    Σ_{i≥s} ζ(i) must not drop across odd parent orbits at even s ≥ εn, and
    every wire on those paths is checked against the Δ case list.
    """
    if not 0 < epsilon < 1:
        raise ParameterError("epsilon must lie in (0, 1)")
    n = aut.base_group.degree
    threshold = epsilon * n
    spa = {g: gate_spa(c, aut, g) for g in c.gates}
    heuristic = any(r.heuristic for r in spa.values())
    prof = {g: SizeProfile.of(r.partition) for g, r in spa.items()}
    counts = path_counts(c)
    gate_reports = []
    pair_reports: dict[tuple, PairAudit] = {}
    even_sizes = [s for s in range(1, n + 1) if s % 2 == 0 and s >= threshold]
    for g in c.gates:
        if prof[g].large_parts(threshold) < 2:
            continue
        witnesses = []
        monotone = True
        for path in enumerate_paths(c, g, limit):
            found = None
            for i in range(len(path) - 1, 0, -1):
                child, parent = path[i], path[i - 1]
                key = (child, parent)
                if key not in pair_reports:
                    pair_reports[key] = _audit_pair(c, aut, prof, child, parent, threshold)
                up = pair_reports[key].up_orbit
                if found is None and up % 2 == 0:
                    found = (parent, child, up)
                if up % 2:
                    for s in even_sizes:
                        if prof[parent].tail(s) < prof[child].tail(s):
                            monotone = False
            witnesses.append(found)
        gate_reports.append(GateAudit(g, prof[g], counts[g], counts[g] % 2 == 0, tuple(witnesses), monotone))
    return EvenPathReport(epsilon, gate_reports, list(pair_reports.values()), heuristic)


def _audit_pair(c: XorCircuit, aut: CircuitAutGroup, prof: dict, child: Hashable, parent: Hashable, threshold: float) -> PairAudit:
    up, down = parent_child_orbits(c, aut, child, parent)
    sizes = set(dict(prof[child].counts)) | set(dict(prof[parent].counts))
    delta = {s: prof[parent][s] - prof[child][s] for s in sizes}
    for s in list(delta):
        for t in (s - 1, s + 1):
            delta.setdefault(t, prof[parent][t] - prof[child][t])
    violations, notes = delta_violations(delta, threshold, len(up))
    return PairAudit(child, parent, tuple(sorted(delta.items())), len(up), len(down), tuple(violations), tuple(notes))


# ---------------------------------------------------------------------------
# counting imbalanced strings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImbalanceCount:
    n: int
    alpha: Fraction
    exact: int
    estimate: float

    @property
    def ratio(self) -> float:
        return self.exact / self.estimate


def binary_entropy(alpha: float) -> float:
    if alpha in (0, 1):
        return 0.0
    return -alpha * math.log2(alpha) - (1 - alpha) * math.log2(1 - alpha)


def imbalance_count(n: int, alpha: float | Fraction) -> ImbalanceCount:
    """Σ_{k ≤ αn} C(n, k) and the entropy estimate 2^{nH(α) − ½ log2 n}."""
    # floats go through their decimal repr so 0.3 means 3/10, not the nearest double
    a = Fraction(alpha) if isinstance(alpha, (Fraction, int)) else Fraction(repr(float(alpha)))
    if not 0 < a <= Fraction(1, 2):
        raise ParameterError("alpha must lie in (0, 1/2]")
    if n < 1:
        raise ParameterError("n must be positive")
    top = math.floor(a * n)
    exact = sum(math.comb(n, k) for k in range(top + 1))
    estimate = 2 ** (n * binary_entropy(float(a)) - 0.5 * math.log2(n))
    return ImbalanceCount(n, a, exact, estimate)


__all__ = [
    "CircuitAutGroup",
    "EvenPathReport",
    "GateAudit",
    "ImbalanceCount",
    "PairAudit",
    "SizeProfile",
    "binary_entropy",
    "circuit_automorphisms",
    "coordinate_action",
    "coordinate_group",
    "count_paths_with_profile",
    "delta_violations",
    "even_path_audit",
    "gate_base_stabilizer",
    "gate_spa",
    "halved_hypercube_circuit",
    "imbalance_count",
    "orbit_profile",
    "parent_child_orbits",
    "profile_classes",
    "profile_product",
    "size_profile",
    "spa_transport_failures",
]
