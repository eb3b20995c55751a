"""Classical stabilizer codes, their logical gates, and circuit-complexity no-go checks."""

__version__ = "0.1.0"

from cscgates.circuit import (
    Circuit,
    CodeblockLayout,
    Gate,
    biased_bound_ok,
    conjugate_through,
    consecutive_bound,
    is_r_transversal_layer,
    layered_bound,
    minimal_r,
)
from cscgates.code import StabilizerCode, verify_code
from cscgates.f2linalg import BitVector, F2Matrix
from cscgates.logical import (
    logical_action,
    preserves_codespace,
    theorem_witness,
    x_rule_check,
    z_algebra_conjugation_check,
    z_span_check,
)
from cscgates.pauli import PauliString, PauliSum, decompose

__all__ = [
    "BitVector",
    "Circuit",
    "CodeblockLayout",
    "F2Matrix",
    "Gate",
    "PauliString",
    "PauliSum",
    "StabilizerCode",
    "biased_bound_ok",
    "conjugate_through",
    "consecutive_bound",
    "decompose",
    "is_r_transversal_layer",
    "layered_bound",
    "logical_action",
    "minimal_r",
    "preserves_codespace",
    "theorem_witness",
    "verify_code",
    "x_rule_check",
    "z_algebra_conjugation_check",
    "z_span_check",
]
