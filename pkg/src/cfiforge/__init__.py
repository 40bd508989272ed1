"""CFI structures, hereditarily finite sets over their edge gadgets, and the
symmetric XOR circuits extracted from them."""

from .cfi import build_cfi, cfi_query
from .genconstruct import build_generalized_circuit, counterexample_space
from .graphs import cycle_graph, hypercube, path_graph
from .hfs import atom, hfset, min_cfi_support, parity_set, stab_E
from .suites import Caps, run_suite
from .symanalysis import even_path_audit, halved_hypercube_circuit, imbalance_count
from .xorcircuit import XorCircuit, fan_in_dim, from_hfs

__version__ = "0.1.0"

__all__ = [
    "Caps",
    "XorCircuit",
    "atom",
    "build_cfi",
    "build_generalized_circuit",
    "cfi_query",
    "counterexample_space",
    "cycle_graph",
    "even_path_audit",
    "fan_in_dim",
    "from_hfs",
    "halved_hypercube_circuit",
    "hfset",
    "hypercube",
    "imbalance_count",
    "min_cfi_support",
    "parity_set",
    "path_graph",
    "run_suite",
    "stab_E",
]
