"""Named verification suites that run the module invariants end to end.

Every suite is deterministic given its seed and caps. Checks carry a short
tag naming the property they exercise; failures, including tripped caps, are
recorded per check instead of aborting the suite.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Mapping

from .cfi import build_cfi, cfi_automorphism_flips, cfi_query, degree_failures, expected_node_count, find_isomorphism, iter_flip_space, maps_structure
from .errors import CfiForgeError
from .genconstruct import build_generalized_circuit, component_of, paired_parity_example
from .graphs import BaseGraph, BasePerm, cycle_graph, cycle_space, graph_automorphisms, hypercube, path_graph
from .hfs import HfSet, is_cfi_symmetric, max_orb_cfi, max_orb_E, min_cfi_support, orb_E_size, parity_set, stab_E, stab_E_bruteforce
from .labels import serialize
from .perm import (
    Partition,
    PermGroup,
    alt_partition_orbit_bruteforce,
    alt_partition_orbit_size,
    alt_supporting_partition,
    conjugate_partition_check,
    orbit_trichotomy_holds,
    sandwich_check,
    set_partitions,
)
from .symanalysis import circuit_automorphisms, coordinate_group, even_path_audit, halved_hypercube_circuit
from .xorcircuit import fan_in_dim, from_hfs, gate_matrix, path_counts, restricted_fan_in_dim, sensitive_inputs_by_paths

SUITES = ("cfi-core", "hfs-orbits", "circuit-kernel", "generalized", "partitions", "even-paths")


@dataclass(frozen=True)
class Caps:
    group: int = 10**6
    support: int = 20
    paths: int = 10**6

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None, **overrides: int | None) -> "Caps":
        """Defaults, then CFIFORGE_CAP_* variables, then explicit overrides."""
        env = os.environ if env is None else env
        values = asdict(cls())
        for name in values:
            raw = env.get(f"CFIFORGE_CAP_{name.upper()}")
            if raw is not None:
                values[name] = int(raw)
            if overrides.get(name) is not None:
                values[name] = int(overrides[name])
        return cls(**values)


@dataclass(frozen=True)
class Check:
    tag: str
    instance: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    name: str
    seed: int
    caps: Caps
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "seed": self.seed,
            "caps": asdict(self.caps),
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [f"suite {self.name} seed={self.seed}"]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            extra = f"  ({c.detail})" if c.detail else ""
            lines.append(f"{mark} [{c.tag}] {c.instance}{extra}")
        lines.append(f"{len(self.checks) - len(self.failures())}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"

    def csv_rows(self) -> list[list[str]]:
        return [["tag", "instance", "passed", "detail"]] + [
            [c.tag, c.instance, "1" if c.passed else "0", c.detail] for c in self.checks
        ]


class _Recorder:
    def __init__(self, report: SuiteReport) -> None:
        self.report = report

    def check(self, tag: str, instance: str, fn: Callable[[], bool | tuple[bool, str]]) -> None:
        try:
            out = fn()
        except CfiForgeError as exc:
            self.report.checks.append(Check(tag, instance, False, f"{type(exc).__name__}: {exc}"))
            return
        passed, detail = out if isinstance(out, tuple) else (out, "")
        self.report.checks.append(Check(tag, instance, bool(passed), detail))


# ---------------------------------------------------------------------------
# instance families shared with the test suite
# ---------------------------------------------------------------------------


def kernel_family_graphs() -> list[tuple[str, BaseGraph]]:
    return [("hypercube:2", hypercube(2)), ("path:6", path_graph(6)), ("cycle:6", cycle_graph(6))]


def kernel_family() -> Iterator[tuple[str, BaseGraph, tuple, HfSet]]:
    """μ = parity_set over every nonempty edge subset of each family graph."""
    for name, g in kernel_family_graphs():
        for k in range(1, len(g.edges) + 1):
            for sub in itertools.combinations(g.edges, k):
                yield name, g, sub, parity_set(list(sub))[0]


def random_subgroup(rng: random.Random, n: int, cap: int = 10**6) -> PermGroup:
    """A subgroup of Sym_n from one to three random generators of mixed kinds."""
    domain = tuple(range(1, n + 1))
    gens = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.random()
        if kind < 0.35:
            p = list(range(n))
            rng.shuffle(p)
        else:
            size = 2 if kind < 0.7 else rng.randint(2, n)
            pts = rng.sample(range(n), min(size, n))
            p = list(range(n))
            for a, b in zip(pts, pts[1:] + pts[:1]):
                p[a] = b
        gens.append(tuple(p))
    return PermGroup(domain, tuple(gens), cap=cap)


def _fmt_set(xs) -> str:
    return "{" + ",".join(sorted(serialize(x) for x in xs)) + "}"


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _cfi_core(rec: _Recorder, rng: random.Random, caps: Caps) -> None:
    for n in (1, 2, 3):
        g = hypercube(n)
        odd_sets = [frozenset()] + [frozenset(rng.sample(g.vertices, rng.randint(1, len(g.vertices)))) for _ in range(5)]
        built = {}
        for s in odd_sets:
            inst = f"hypercube:{n} S={_fmt_set(s)}"
            c = build_cfi(g, s)
            built[s] = c
            rec.check("node-count", inst, lambda c=c: c.node_count() == expected_node_count(g))
            rec.check("degree", inst, lambda c=c: not degree_failures(c))
            rec.check("parity-query", inst, lambda s=s: cfi_query(g, s) == ("odd" if len(s) % 2 else "even"))
        ident = [BasePerm.identity(g.vertices)]
        for s, r in itertools.combinations(odd_sets, 2):
            inst = f"hypercube:{n} S={_fmt_set(s)} R={_fmt_set(r)}"
            rec.check(
                "parity-theorem",
                inst,
                lambda s=s, r=r: (find_isomorphism(built[s], built[r], ident) is not None) == (len(s) % 2 == len(r) % 2),
            )
        cyc = cfi_automorphism_flips(g)
        rec.check("flip-group", f"hypercube:{n} dim", lambda: cyc.dim == len(g.edges) - len(g.vertices) + 1)
        c0 = built[frozenset()]
        rec.check(
            "flip-group",
            f"hypercube:{n} cycle flips fix the structure",
            lambda: all(maps_structure(c0, c0, ident[0], f) for f in iter_flip_space(cyc)),
        )


def _hfs_orbits(rec: _Recorder, rng: random.Random, caps: Caps) -> None:
    for k in range(1, 7):
        edges = [f"e{i}" for i in range(1, k + 1)]
        mu, tilde = parity_set(edges)
        inst = f"parity_set k={k}"
        rec.check("cfi-symmetry", inst, lambda mu=mu: is_cfi_symmetric(mu, caps.support).symmetric)
        rec.check("super-symmetry", inst, lambda mu=mu: orb_E_size(mu, caps.support) <= 2)
        rec.check("support", inst, lambda mu=mu, edges=edges: min_cfi_support(mu) == frozenset(edges))
        rec.check(
            "stabilizer-oracle",
            inst,
            lambda mu=mu, edges=edges: stab_E(mu, edges, caps.support) == stab_E_bruteforce(mu, edges, caps.support),
        )
        rec.check("orbit-pair", inst, lambda mu=mu, tilde=tilde: mu is not tilde and stab_E(mu, edges) == stab_E(tilde, edges))


def _kernel_checks(rec: _Recorder, name: str, g: BaseGraph, sub: tuple, mu: HfSet, caps: Caps) -> None:
    inst = f"{name} B={_fmt_set(sub)}"
    q = from_hfs(mu)
    c = q.circuit
    rec.check(
        "kernel-lemma",
        inst,
        lambda: all(
            gate_matrix(c, i, g.edges).kernel() == stab_E(next(iter(q.classes[i])), g.edges, caps.support) for i in c.gates
        ),
    )
    orb = max_orb_E(mu, caps.support)
    rec.check("dimension-lemma", inst, lambda: 2 ** fan_in_dim(c) == orb)
    rec.check(
        "restricted-dimension",
        inst,
        lambda: 2 ** restricted_fan_in_dim(c, cycle_space(g)) <= max_orb_cfi(mu, g),
    )
    rec.check("sensitivity-support", inst, lambda: c.sensitivity(c.root) == min_cfi_support(mu))
    rec.check("path-parity", inst, lambda: sensitive_inputs_by_paths(c) == c.sensitivity(c.root))


def _circuit_kernel(rec: _Recorder, rng: random.Random, caps: Caps) -> None:
    g = path_graph(5)
    _kernel_checks(rec, "path:5", g, g.edges, parity_set(list(g.edges))[0], caps)
    g = hypercube(2)
    for k in range(1, len(g.edges) + 1):
        for sub in itertools.combinations(g.edges, k):
            _kernel_checks(rec, "hypercube:2", g, sub, parity_set(list(sub))[0], caps)


def generalized_matches(g: BaseGraph, mu: HfSet, auts: list) -> tuple[bool, str]:
    """Ĉ(μ) against C(μ): class kernels, fan-in dimension and root sensitivity."""
    q = from_hfs(mu)
    gc = build_generalized_circuit(mu, g, auts)
    gm = gc.matrices
    kernels = all(
        gm.m[i].kernel() == gate_matrix(q.circuit, q.gate_of(gm.reps[i]), gm.m[i].col_labels).kernel()
        for i in range(len(gm.classes))
        if gm.reps[i] in q.class_of
    )
    dims = fan_in_dim(gc.circuit) == fan_in_dim(q.circuit)
    root = gc.circuit.sensitivity(gc.circuit.root) == q.circuit.sensitivity(q.circuit.root)
    return kernels and dims and root, f"kernels={kernels} fan_in={dims} root={root}"


def paired_example_checks(g: BaseGraph | None = None) -> dict:
    """Build Ĉ for {{μ_B, e_0}} and collect the quantities the examples pin down."""
    g = g or path_graph(3)
    mu = paired_parity_example(g.edges[1:], g.edges[0])
    gc = build_generalized_circuit(mu, g, graph_automorphisms(g))
    gm = gc.matrices
    component_ok = all(
        (gm.n[(cx, cy)] @ gm.m[cy]).kernel() == stab_E(component_of(gm, cx, cy), gm.edges) for (cx, cy) in gm.n
    )
    c = gc.circuit
    sup = min_cfi_support(mu)
    fd = fan_in_dim(c)
    return {
        "symmetric": is_cfi_symmetric(mu).symmetric,
        "gates": c.size(),
        "component_kernels": component_ok,
        "root_sensitivity": c.sensitivity(c.root),
        "support": sup,
        "fan_in_dim": fd,
        "bound_holds": fd > 0 and len(c.sensitivity(c.root)) * fd >= len(sup),
    }


def _generalized(rec: _Recorder, rng: random.Random, caps: Caps) -> None:
    g = hypercube(2)
    auts = graph_automorphisms(g)
    for k in range(1, len(g.edges) + 1):
        for sub in itertools.combinations(g.edges, k):
            mu = parity_set(list(sub))[0]
            rec.check("generalized-agrees", f"hypercube:2 B={_fmt_set(sub)}", lambda mu=mu: generalized_matches(g, mu, auts))
    info: dict = {}

    def build() -> bool:
        info.update(paired_example_checks())
        return True

    rec.check("generalized-builds", "{{mu_B, e_0}} over path:3", build)
    rec.check("component-kernel", "{{mu_B, e_0}} over path:3", lambda: info.get("component_kernels", False))
    rec.check("root-bound", "{{mu_B, e_0}} over path:3", lambda: info.get("bound_holds", False))


def _partitions(rec: _Recorder, rng: random.Random, caps: Caps) -> None:
    for i in range(60):
        n = rng.randint(2, 7)
        grp = random_subgroup(rng, n, caps.group)
        inst = f"subgroup #{i} n={n} |G|={grp.order()}"
        rec.check(
            "engines-agree",
            inst,
            lambda grp=grp: alt_supporting_partition(grp, "exhaustive").partition == alt_supporting_partition(grp, "merge").partition,
        )
        rec.check("sandwich", inst, lambda grp=grp: sandwich_check(grp))
        sigma = tuple(rng.sample(range(n), n))
        rec.check("conjugacy", inst, lambda grp=grp, sigma=sigma: conjugate_partition_check(grp, sigma))
    for n in range(1, 7):
        shapes = {}
        for parts in set_partitions(n):
            p = Partition.of(parts)
            shapes.setdefault(tuple(sorted(len(x) for x in p.parts)), p)
        for shape, p in sorted(shapes.items()):
            rec.check(
                "orbit-size",
                f"n={n} shape={shape}",
                lambda p=p, n=n: alt_partition_orbit_size(p, n)[0] == alt_partition_orbit_bruteforce(p, n),
            )
            if n >= 4:
                rec.check("orbit-trichotomy", f"n={n} shape={shape}", lambda p=p, n=n: orbit_trichotomy_holds(p, n))


def _even_paths(rec: _Recorder, rng: random.Random, caps: Caps) -> None:
    for n in range(3, 7):
        c = halved_hypercube_circuit(n)
        counts = path_counts(c)
        inst = f"halved hypercube n={n}"
        rec.check("root-insensitive", inst, lambda c=c: not c.sensitivity(c.root))
        rec.check("even-leaf-paths", inst, lambda c=c, counts=counts: all(counts[g] % 2 == 0 for g in c.leaves()))

        def audit(c=c, n=n) -> tuple[bool, str]:
            aut = circuit_automorphisms(c, coordinate_group(n))
            rep = even_path_audit(c, aut, 0.3, caps.paths)
            odd = [g.gate for g in rep.gates if not g.even]
            bad_pairs = sum(1 for p in rep.pairs if not p.ok)
            return rep.passed, f"audited={rep.audited} odd={odd} pair_violations={bad_pairs}"

        rec.check("even-path-audit", f"{inst} eps=0.3", audit)


_RUNNERS = {
    "cfi-core": _cfi_core,
    "hfs-orbits": _hfs_orbits,
    "circuit-kernel": _circuit_kernel,
    "generalized": _generalized,
    "partitions": _partitions,
    "even-paths": _even_paths,
}


def run_suite(name: str, seed: int = 0, caps: Caps | None = None) -> SuiteReport:
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    caps = caps or Caps()
    report = SuiteReport(name, seed, caps)
    _RUNNERS[name](_Recorder(report), random.Random(seed), caps)
    return report
