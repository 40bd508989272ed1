"""XOR circuits: sensitivity, gate matrices, fan-in dimension, the quotient circuit of an h.f. set,
path counting, and automorphism extension search."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterator, Mapping, Sequence

from .errors import ResourceLimitError, ValidationError
from .f2 import F2Matrix, F2Subspace, image
from .graphs import BasePerm, edge_action
from .hfs import HfSet, act_perm, is_cfi_symmetric, sim_classes
from .labels import from_jsonable, serialize, sort_labels, to_jsonable

Gate = Hashable
LabelAction = Callable[[Any, Hashable], Hashable]


@dataclass(frozen=True, eq=False)
class XorCircuit:
    """A rooted DAG of XOR gates whose leaves carry input labels."""

    gates: tuple
    wires: frozenset
    root: Gate
    labels: Mapping[Gate, Hashable]
    _index: dict = field(init=False, repr=False)
    _children: tuple = field(init=False, repr=False)
    _parents: tuple = field(init=False, repr=False)
    _topo: tuple = field(init=False, repr=False)
    _sens: tuple = field(init=False, repr=False)
    _label_order: tuple = field(init=False, repr=False)

    def __post_init__(self) -> None:
        gates = tuple(sort_labels(set(self.gates)))
        if len(gates) != len(self.gates):
            raise ValidationError("duplicate gate ids")
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "wires", frozenset(tuple(w) for w in self.wires))
        object.__setattr__(self, "labels", dict(self.labels))
        index = {g: i for i, g in enumerate(gates)}
        if self.root not in index:
            raise ValidationError("root is not a gate")
        children: list[list[int]] = [[] for _ in gates]
        parents: list[list[int]] = [[] for _ in gates]
        for p, c in self.wires:
            if p not in index or c not in index:
                raise ValidationError(f"wire {(p, c)!r} references an unknown gate")
            children[index[p]].append(index[c])
            parents[index[c]].append(index[p])
        for lst in children + parents:
            lst.sort()
        for g in gates:
            is_leaf = not children[index[g]]
            if is_leaf and g not in self.labels:
                raise ValidationError(f"leaf {g!r} has no label")
            if not is_leaf and g in self.labels:
                raise ValidationError(f"internal gate {g!r} carries a label")
        for g in self.labels:
            if g not in index:
                raise ValidationError(f"label for unknown gate {g!r}")
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))
        object.__setattr__(self, "_parents", tuple(tuple(p) for p in parents))
        object.__setattr__(self, "_topo", self._toposort())
        reach = self._reachable()
        if len(reach) != len(gates):
            raise ValidationError("every gate must be reachable from the root")
        label_order = tuple(sort_labels(set(self.labels.values())))
        object.__setattr__(self, "_label_order", label_order)
        lidx = {lab: i for i, lab in enumerate(label_order)}
        sens = [0] * len(gates)
        for i in self._topo:
            if children[i]:
                acc = 0
                for c in children[i]:
                    acc ^= sens[c]
                sens[i] = acc
            else:
                sens[i] = 1 << lidx[self.labels[gates[i]]]
        object.__setattr__(self, "_sens", tuple(sens))

    def _toposort(self) -> tuple:
        """Children before parents; raises on a cycle."""
        n = len(self.gates)
        pending = [len(c) for c in self._children]
        ready = [i for i in range(n) if pending[i] == 0]
        order = []
        while ready:
            i = ready.pop()
            order.append(i)
            for p in self._parents[i]:
                pending[p] -= 1
                if pending[p] == 0:
                    ready.append(p)
        if len(order) != n:
            raise ValidationError("wires contain a cycle")
        return tuple(order)

    def _reachable(self) -> set:
        r = self._index[self.root]
        seen = {r}
        stack = [r]
        while stack:
            i = stack.pop()
            for c in self._children[i]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    # structure --------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, XorCircuit)
            and self.gates == other.gates
            and self.wires == other.wires
            and self.root == other.root
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.gates, self.wires, self.root))

    def size(self) -> int:
        return len(self.gates)

    def children(self, g: Gate) -> list:
        return [self.gates[c] for c in self._children[self._index[g]]]

    def parents(self, g: Gate) -> list:
        return [self.gates[p] for p in self._parents[self._index[g]]]

    def is_leaf(self, g: Gate) -> bool:
        return not self._children[self._index[g]]

    def leaves(self) -> list:
        return [g for g in self.gates if self.is_leaf(g)]

    def topological(self) -> list:
        """Gates with every child listed before its parents."""
        return [self.gates[i] for i in self._topo]

    def label_universe(self) -> tuple:
        return self._label_order

    # sensitivity ------------------------------------------------------------

    def sensitivity(self, g: Gate) -> frozenset:
        bits = self._sens[self._index[g]]
        return frozenset(lab for i, lab in enumerate(self._label_order) if bits >> i & 1)

    def sensitivity_bits(self, g: Gate, columns: Sequence[Hashable]) -> int:
        cidx = {lab: i for i, lab in enumerate(columns)}
        out = 0
        for lab in self.sensitivity(g):
            try:
                out |= 1 << cidx[lab]
            except KeyError:
                raise ValidationError(f"label {lab!r} missing from the column set") from None
        return out

    # io -----------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "gates": [to_jsonable(g) for g in self.gates],
            "wires": sorted(([to_jsonable(p), to_jsonable(c)] for p, c in self.wires), key=serialize),
            "root": to_jsonable(self.root),
            "labels": {serialize(g): to_jsonable(self.labels[g]) for g in sort_labels(self.labels)},
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "XorCircuit":
        return cls(
            gates=tuple(from_jsonable(g) for g in obj["gates"]),
            wires=frozenset((from_jsonable(p), from_jsonable(c)) for p, c in obj["wires"]),
            root=from_jsonable(obj["root"]),
            labels={from_jsonable(json.loads(k)): from_jsonable(v) for k, v in obj["labels"].items()},
        )

    def to_dot(self) -> str:
        names = {g: f"g{i}" for i, g in enumerate(self.gates)}
        lines = ["digraph circuit {"]
        for g in self.gates:
            sens = ",".join(serialize(x) for x in sort_labels(self.sensitivity(g)))
            head = f"leaf {serialize(self.labels[g])}" if g in self.labels else f"xor {serialize(g)}"
            shape = "doublecircle" if g == self.root else ("box" if g in self.labels else "circle")
            lines.append(f"  {names[g]} [label={json.dumps(head + ' | X=' + '{' + sens + '}')}, shape={shape}];")
        for p, c in sorted(self.wires, key=serialize):
            lines.append(f"  {names[p]} -> {names[c]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def sensitivity(c: XorCircuit, g: Gate) -> frozenset:
    return c.sensitivity(g)


# ---------------------------------------------------------------------------
# gate matrices and fan-in dimension
# ---------------------------------------------------------------------------


def gate_matrix(c: XorCircuit, g: Gate, columns: Sequence[Hashable] | None = None) -> F2Matrix:
    """Rows are the sensitivity vectors of the children; a leaf has its own single row."""
    cols = tuple(columns) if columns is not None else c.label_universe()
    rows_of = c.children(g) or [g]
    return F2Matrix(tuple(rows_of), cols, tuple(c.sensitivity_bits(h, cols) for h in rows_of))


def fan_in_dim(c: XorCircuit) -> int:
    return max(gate_matrix(c, g).rank() for g in c.gates)


def restricted_fan_in_dim(c: XorCircuit, cyc: F2Subspace) -> int:
    return max(image(gate_matrix(c, g, cyc.ambient), cyc).dim for g in c.gates)


# ---------------------------------------------------------------------------
# the quotient circuit of an h.f. set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientCircuit:
    circuit: XorCircuit
    class_of: Mapping[HfSet, int]
    classes: tuple

    def gate_of(self, x: HfSet) -> int:
        return self.class_of[x]


def from_hfs(mu: HfSet, bypass: bool = False) -> QuotientCircuit:
    """The circuit of ∼_E classes of tc(μ), wired by membership.

    Classes of childless non-atoms (the empty set) compute the constant zero
    and are left out together with their incoming wires.
    """
    if not mu.is_atom and not mu.children:
        raise ValidationError("the empty set has no circuit")
    if not bypass:
        report = is_cfi_symmetric(mu)
        if not report.symmetric:
            raise ValidationError(f"set is not CFI-symmetric: {report.violation.reason}")
    classes = [cls for cls in sim_classes(mu) if next(iter(cls)).is_atom or next(iter(cls)).children]
    class_of: dict = {}
    for i, cls in enumerate(classes):
        for x in cls:
            class_of[x] = i
    wires = set()
    labels = {}
    for i, cls in enumerate(classes):
        for x in cls:
            if x.is_atom:
                labels[i] = x.edge
            for y in x:
                if y in class_of:
                    wires.add((i, class_of[y]))
    circuit = XorCircuit(tuple(range(len(classes))), frozenset(wires), class_of[mu], labels)
    return QuotientCircuit(circuit, class_of, tuple(classes))


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------


def path_counts(c: XorCircuit) -> dict:
    """Number of distinct root-to-gate paths, exact."""
    counts = [0] * len(c.gates)
    counts[c._index[c.root]] = 1
    for i in reversed(c._topo):
        if counts[i]:
            for ch in c._children[i]:
                counts[ch] += counts[i]
    return {g: counts[i] for i, g in enumerate(c.gates)}


def path_parity(c: XorCircuit, leaf: Gate) -> int:
    return path_counts(c)[leaf] & 1


def sensitive_inputs_by_paths(c: XorCircuit) -> frozenset:
    """Labels whose leaves have an odd total number of root paths."""
    counts = path_counts(c)
    acc: Counter = Counter()
    for g in c.leaves():
        acc[c.labels[g]] ^= counts[g] & 1
    return frozenset(lab for lab, bit in acc.items() if bit)


def enumerate_paths(c: XorCircuit, target: Gate, limit: int = 10**6) -> list[tuple]:
    """Every root-to-target path, as gate tuples. Raises past ``limit``."""
    t = c._index[target]
    out: list[tuple] = []
    can_reach = _can_reach(c, t)

    def rec(i: int, acc: list[int]) -> None:
        if i == t:
            out.append(tuple(c.gates[j] for j in acc))
            if len(out) > limit:
                raise ResourceLimitError(f"more than {limit} paths", partial=len(out))
            return
        for ch in c._children[i]:
            if ch in can_reach:
                acc.append(ch)
                rec(ch, acc)
                acc.pop()

    r = c._index[c.root]
    if r in can_reach:
        rec(r, [r])
    return out


def _can_reach(c: XorCircuit, t: int) -> set:
    seen = {t}
    stack = [t]
    while stack:
        i = stack.pop()
        for p in c._parents[i]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


# ---------------------------------------------------------------------------
# automorphism extension search
# ---------------------------------------------------------------------------


def _refine(c: XorCircuit, colors: list[int]) -> list[int]:
    """Joint colour refinement on two copies; ``colors`` has 2m entries."""
    m = len(c.gates)
    ch, pa = c._children, c._parents
    while True:
        table: dict = {}
        new = []
        for k in range(2 * m):
            i, off = (k, 0) if k < m else (k - m, m)
            sig = (
                colors[k],
                tuple(sorted(colors[off + x] for x in ch[i])),
                tuple(sorted(colors[off + x] for x in pa[i])),
            )
            new.append(table.setdefault(sig, len(table)))
        if len(table) == len(set(colors)):
            return new
        colors = new


def extensions(c: XorCircuit, label_map: Callable[[Hashable], Hashable], limit: int | None = None) -> Iterator[tuple]:
    """All gate bijections σ fixing the root, preserving wires, with ℓ(σg) = label_map(ℓ(g)).

    Each σ is a tuple of gate indices. The search is individualization-refinement
    over two copies of the circuit and enumerates every automorphism exactly once.
    """
    m = len(c.gates)
    root = c._index[c.root]
    keys: dict = {}

    def key(tag: Any) -> int:
        return keys.setdefault(serialize(tag), len(keys))

    init = []
    for side in (0, 1):
        for i, g in enumerate(c.gates):
            if i == root:
                init.append(key(["root"]))
            elif g in c.labels:
                lab = c.labels[g] if side == 1 else label_map(c.labels[g])
                init.append(key(["leaf", to_jsonable(lab)]))
            else:
                init.append(key(["gate"]))
    colors = _refine(c, init)
    count = 0

    def balanced(col: list[int]) -> bool:
        return Counter(col[:m]) == Counter(col[m:])

    def rec(col: list[int]) -> Iterator[tuple]:
        nonlocal count
        if not balanced(col):
            return
        classes: dict = {}
        for i in range(m):
            classes.setdefault(col[i], []).append(i)
        target = None
        for cl, members in sorted(classes.items(), key=lambda kv: (len(kv[1]), kv[0])):
            if len(members) > 1:
                target = members[0]
                break
        if target is None:
            where = {col[m + j]: j for j in range(m)}
            sigma = tuple(where[col[i]] for i in range(m))
            if _is_extension(c, sigma, label_map):
                count += 1
                yield sigma
            return
        fresh = max(col) + 1
        for j in range(m):
            if col[m + j] == col[target]:
                trial = list(col)
                trial[target] = fresh
                trial[m + j] = fresh
                yield from rec(_refine(c, trial))
                if limit is not None and count >= limit:
                    return

    yield from rec(colors)


def _is_extension(c: XorCircuit, sigma: tuple, label_map: Callable[[Hashable], Hashable]) -> bool:
    if sorted(sigma) != list(range(len(sigma))):
        return False
    root = c._index[c.root]
    if sigma[root] != root:
        return False
    for i, ch in enumerate(c._children):
        if sorted(sigma[x] for x in ch) != list(c._children[sigma[i]]):
            return False
    for g, lab in c.labels.items():
        if c.labels.get(c.gates[sigma[c._index[g]]]) != label_map(lab):
            return False
    return True


def find_extension(c: XorCircuit, label_map: Callable[[Hashable], Hashable]) -> tuple | None:
    return next(extensions(c, label_map, limit=1), None)


def edge_label_action(pi: BasePerm, label: Hashable) -> Hashable:
    return edge_action(pi, label)


def vertex_label_action(pi: BasePerm, label: Hashable) -> Hashable:
    return pi(label)


@dataclass(frozen=True)
class CircuitStabReport:
    all_extend: bool
    failures: tuple
    stab_mu_order: int
    orbit_mu: int
    orbit_circuit: int

    @property
    def orbit_bound_holds(self) -> bool:
        return self.orbit_circuit <= self.orbit_mu


def circuit_stab_check(
    mu: HfSet, quotient: QuotientCircuit, base_perms: Sequence[BasePerm], label_action: LabelAction = edge_label_action
) -> CircuitStabReport:
    """Check that every π fixing μ extends to C(μ) through σ'([x]) = [πx]."""
    c = quotient.circuit
    failures = []
    images = set()
    stab_mu = 0
    for pi in base_perms:
        image_mu = act_perm(pi, mu)
        images.add(image_mu)
        if image_mu is not mu:
            continue
        stab_mu += 1
        sigma_map: dict = {}
        ok = True
        for x, gi in quotient.class_of.items():
            tgt = quotient.class_of.get(act_perm(pi, x))
            if tgt is None or sigma_map.setdefault(gi, tgt) != tgt:
                ok = False
                break
        if ok:
            sigma = tuple(c._index[sigma_map[c.gates[i]]] for i in range(len(c.gates)))
            ok = _is_extension(c, sigma, lambda lab: label_action(pi, lab))
        if not ok:
            failures.append(pi)
    extending = sum(1 for pi in base_perms if find_extension(c, lambda lab, pi=pi: label_action(pi, lab)) is not None)
    return CircuitStabReport(
        all_extend=not failures,
        failures=tuple(failures),
        stab_mu_order=stab_mu,
        orbit_mu=len(images),
        orbit_circuit=len(base_perms) // extending,
    )
