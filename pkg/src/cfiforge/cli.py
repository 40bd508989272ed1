"""Command-line entry point: build, query, analyze, audit, run suites, export."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import hfs
from .cfi import CfiStructure, build_cfi, cfi_query
from .errors import CfiForgeError, ParameterError, ValidationError
from .genconstruct import build_generalized_circuit
from .graphs import graph_automorphisms, parse_base
from .labels import display, sort_labels, to_jsonable
from .suites import SUITES, Caps, SuiteReport, run_suite
from .symanalysis import circuit_automorphisms, coordinate_group, even_path_audit, halved_hypercube_circuit
from .xorcircuit import XorCircuit, fan_in_dim, from_hfs, path_counts, sensitive_inputs_by_paths

FORMATS = ("json", "dot", "csv")


# ---------------------------------------------------------------------------
# export / import
# ---------------------------------------------------------------------------


def _rows_to_csv(rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _hfs_dot(x: hfs.HfSet) -> str:
    members = hfs.bottom_up(hfs.tc(x) | {x})
    names = {y: f"s{i}" for i, y in enumerate(members)}
    lines = ["digraph hfs {"]
    for y in members:
        label = hfs.pretty(y) if y.is_atom else f"set {y.key[:8]}"
        lines.append(f"  {names[y]} [label={json.dumps(label)}];")
    for y in members:
        if not y.is_atom:
            for z in hfs.sorted_by_key(y.children):
                lines.append(f"  {names[y]} -> {names[z]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _circuit_csv(c: XorCircuit) -> str:
    counts = path_counts(c)
    rows = [["gate", "label", "sensitivity", "paths"]]
    for g in c.gates:
        lab = display(c.labels[g]) if g in c.labels else ""
        sens = ";".join(display(e) for e in sort_labels(c.sensitivity(g)))
        rows.append([display(g), lab, sens, str(counts[g])])
    return _rows_to_csv(rows)


def export(obj: Any, fmt: str) -> bytes:
    """Serialize a structure, h.f. set, circuit, support report or suite report."""
    if fmt not in FORMATS:
        raise ValidationError(f"unknown format {fmt!r}")
    text: str | None = None
    if isinstance(obj, CfiStructure):
        text = {"json": lambda: json.dumps(obj.to_json(), indent=2) + "\n", "dot": obj.to_dot}.get(fmt, lambda: None)()
    elif isinstance(obj, hfs.HfSet):
        text = {"json": lambda: json.dumps(hfs.to_json(obj)) + "\n", "dot": lambda: _hfs_dot(obj)}.get(fmt, lambda: None)()
    elif isinstance(obj, XorCircuit):
        text = {
            "json": lambda: json.dumps(obj.to_json(), indent=2) + "\n",
            "dot": obj.to_dot,
            "csv": lambda: _circuit_csv(obj),
        }[fmt]()
    elif isinstance(obj, hfs.SupportReport):
        text = {
            "json": lambda: json.dumps(obj.to_json(), indent=2) + "\n",
            "csv": lambda: _rows_to_csv([list(hfs.SupportReport.CSV_HEADER), obj.csv_row()]),
        }.get(fmt, lambda: None)()
    elif isinstance(obj, SuiteReport):
        text = {
            "json": lambda: json.dumps(obj.to_json(), indent=2) + "\n",
            "csv": lambda: _rows_to_csv(obj.csv_rows()),
        }.get(fmt, lambda: None)()
    else:
        raise ValidationError(f"cannot export {type(obj).__name__}")
    if text is None:
        raise ValidationError(f"{type(obj).__name__} has no {fmt} form")
    return text.encode()


def import_json(kind: str, data: bytes | str) -> Any:
    obj = json.loads(data)
    if kind == "cfi":
        return CfiStructure.from_json(obj)
    if kind == "hfs":
        return hfs.from_json(obj)
    if kind == "circuit":
        return XorCircuit.from_json(obj["circuit"] if "circuit" in obj and "gates" not in obj else obj)
    raise ValidationError(f"no JSON import for {kind!r}")


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _emit(args: argparse.Namespace, payload: bytes | str) -> None:
    data = payload.encode() if isinstance(payload, str) else payload
    if getattr(args, "out", None):
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _split(text: str | None) -> list[str]:
    return [t for t in (text or "").split(",") if t]


def _cmd_cfi_build(args: argparse.Namespace) -> int:
    g = parse_base(args.base)
    vertices = {str(v): v for v in g.vertices}
    chosen = []
    for v in _split(args.odd):
        if v not in vertices:
            raise ValidationError(f"vertex {v!r} not in {args.base}")
        chosen.append(vertices[v])
    _emit(args, export(build_cfi(g, chosen), args.format))
    return 0


def _cmd_cfi_query(args: argparse.Namespace) -> int:
    c = import_json("cfi", _read(args.input))
    _emit(args, cfi_query(c.base, c.odd_set) + "\n")
    return 0


def _cmd_hfs_parity(args: argparse.Namespace) -> int:
    edges = _split(args.edges)
    mu, tilde = hfs.parity_set(edges)
    _emit(args, export(tilde if args.tilde else mu, args.format))
    return 0


def _cmd_hfs_report(args: argparse.Namespace) -> int:
    mu = import_json("hfs", _read(args.input))
    g = parse_base(args.base) if args.base else None
    rep = hfs.support_report(mu, g.edges if g else None, g)
    _emit(args, export(rep, args.format))
    return 0


def _cmd_from_hfs(args: argparse.Namespace) -> int:
    mu = import_json("hfs", _read(args.input))
    if not args.general:
        _emit(args, export(from_hfs(mu).circuit, args.format))
        return 0
    g = parse_base(args.base) if args.base else None
    gc = build_generalized_circuit(mu, g, graph_automorphisms(g) if g else None)
    if args.format == "json":
        body = {"circuit": gc.circuit.to_json(), "matrices": gc.matrices.to_json(), "pruned": gc.pruned}
        _emit(args, json.dumps(body, indent=2) + "\n")
    else:
        _emit(args, export(gc.circuit, args.format))
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    c = import_json("circuit", _read(args.input))
    everything = not (args.dims or args.sensitivity or args.paths)
    out: dict[str, Any] = {"gates": c.size(), "wires": len(c.wires)}
    if args.dims or everything:
        out["fan_in_dim"] = fan_in_dim(c)
    if args.sensitivity or everything:
        out["root_sensitivity"] = [to_jsonable(e) for e in sort_labels(c.sensitivity(c.root))]
        out["path_sensitivity"] = [to_jsonable(e) for e in sort_labels(sensitive_inputs_by_paths(c))]
    if args.paths or everything:
        counts = path_counts(c)
        out["leaf_paths"] = {display(g): counts[g] for g in c.leaves()}
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0


def _cmd_halved(args: argparse.Namespace) -> int:
    _emit(args, export(halved_hypercube_circuit(args.n), args.format))
    return 0


def _cmd_audit(args: argparse.Namespace) -> int:
    if args.base != "sym":
        raise ValidationError("only the coordinate action of Sym_n is supported")
    if args.input:
        c = import_json("circuit", _read(args.input))
        n = len(c.root) if isinstance(c.root, str) else None
        if n is None:
            raise ValidationError("audit needs gates named by bit strings")
    elif args.n:
        c, n = halved_hypercube_circuit(args.n), args.n
    else:
        raise ValidationError("give --in or -n")
    caps = _caps(args)
    aut = circuit_automorphisms(c, coordinate_group(n))
    rep = even_path_audit(c, aut, args.epsilon, caps.paths)
    if args.format == "csv":
        _emit(args, _rows_to_csv(rep.csv_rows()))
    else:
        body = {
            "epsilon": rep.epsilon,
            "passed": rep.passed,
            "heuristic": rep.heuristic,
            "audited": rep.audited,
            "odd_gates": [g.gate for g in rep.gates if not g.even],
            "pair_violations": [[p.child, p.parent, list(p.violations)] for p in rep.pairs if not p.ok],
        }
        _emit(args, json.dumps(body, indent=2) + "\n")
    return 0 if rep.passed else 1


def _caps(args: argparse.Namespace) -> Caps:
    return Caps.from_env(group=args.cap_group, support=args.cap_support, paths=args.cap_paths)


def _cmd_suite(args: argparse.Namespace) -> int:
    names = SUITES if args.name == "all" else (args.name,)
    caps = _caps(args)
    reports = [run_suite(n, args.seed, caps) for n in names]
    if args.format == "text":
        _emit(args, "".join(r.to_text() for r in reports))
    elif args.format == "json":
        _emit(args, json.dumps([r.to_json() for r in reports], indent=2) + "\n")
    else:
        _emit(args, b"".join(export(r, "csv") for r in reports))
    return 0 if all(r.passed for r in reports) else 1


def _cmd_export(args: argparse.Namespace) -> int:
    obj = import_json(args.kind, _read(args.input))
    _emit(args, export(obj, args.format))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_caps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap-group", type=int, default=None, help="max enumerated group order")
    p.add_argument("--cap-support", type=int, default=None, help="max CFI-support size")
    p.add_argument("--cap-paths", type=int, default=None, help="max enumerated root paths")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfiforge", description=__doc__)
    top = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")

    cfi = top.add_parser("cfi", help="build CFI structures and answer the parity query").add_subparsers(dest="action", required=True)
    p = cfi.add_parser("build", parents=[common], help="build a CFI structure")
    p.add_argument("--base", required=True, help="hypercube:N, path:N, cycle:N or complete:N")
    p.add_argument("--odd", default="", help="comma-separated odd vertices")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=_cmd_cfi_build)
    p = cfi.add_parser("query", parents=[common], help="print odd or even")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=_cmd_cfi_query)

    hf = top.add_parser("hfs", help="parity-tracking sets and their supports").add_subparsers(dest="action", required=True)
    p = hf.add_parser("parity-set", parents=[common], help="the parity-tracking set over some edges")
    p.add_argument("--edges", required=True)
    p.add_argument("--tilde", action="store_true", help="emit the flipped twin")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=_cmd_hfs_parity)
    p = hf.add_parser("report", parents=[common], help="supports, stabilizer and orbit sizes")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--base", help="base graph for cycle-space orbits")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_hfs_report)

    circ = top.add_parser("circuit", help="XOR circuits and their analyses").add_subparsers(dest="action", required=True)
    p = circ.add_parser("from-hfs", parents=[common], help="C(mu), or the generalized circuit with --general")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--general", action="store_true")
    p.add_argument("--base", help="base graph whose automorphisms act on mu (with --general)")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(func=_cmd_from_hfs)
    p = circ.add_parser("analyze", parents=[common], help="fan-in dimension, sensitivity and leaf path counts")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dims", action="store_true")
    p.add_argument("--sensitivity", action="store_true")
    p.add_argument("--paths", action="store_true")
    p.set_defaults(func=_cmd_analyze)
    p = circ.add_parser("halved-hypercube", parents=[common], help="the halved hypercube circuit on n coordinates")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(func=_cmd_halved)
    p = circ.add_parser("audit", parents=[common], help="even-path audit under Sym_n")
    p.add_argument("--in", dest="input")
    p.add_argument("-n", type=int)
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--base", default="sym")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    _add_caps(p)
    p.set_defaults(func=_cmd_audit)

    p = top.add_parser("suite", parents=[common], help="run a named verification suite")
    p.add_argument("name", choices=SUITES + ("all",))
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    _add_caps(p)
    p.set_defaults(func=_cmd_suite)

    p = top.add_parser("export", parents=[common], help="convert a JSON file to another format")
    p.add_argument("--kind", choices=("cfi", "hfs", "circuit"), required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=FORMATS, required=True)
    p.set_defaults(func=_cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return args.func(args)
    except (ParameterError, ValidationError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CfiForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
