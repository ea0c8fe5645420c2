"""Exact dense-state oracle for small trivalent fragments."""

from .checks import run_oracle_suite, verify_weight_convention
from .dense import is_stabilized, povm_element, resolve_sign, symmetric_projector
from .fragments import (FragmentGraph, apply_povm_config, build_aklt_fragment,
                        builtin_fragments, fragment_norm_sq, load_fragments)
from .pauli import PauliString
from .stabilizers import expected_graph_stabilizers, verify_stabilizer_set

__all__ = [
    "FragmentGraph", "PauliString", "apply_povm_config", "build_aklt_fragment",
    "builtin_fragments", "expected_graph_stabilizers", "fragment_norm_sq",
    "is_stabilized", "load_fragments", "povm_element", "resolve_sign",
    "run_oracle_suite", "symmetric_projector", "verify_stabilizer_set",
    "verify_weight_convention",
]
