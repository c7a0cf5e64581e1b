"""Reversible circuits with verified ancillae.

Compile boolean expressions to oracle circuits, simulate them under safe and
unsafe assertion semantics, and check that every ancilla assertion holds.
"""

from .adder import adder_1, adder_circ, adder_left, adder_right, check_adder_spec, compute_adder_n
from .bexp import And, Const, Not, Var, Xor, interp, parse_bexp, pretty
from .circuit import Circuit, id_circ, in_par, in_seq, parse_circuit, serialize
from .compiler import check_compile_correct, compile_bexp, compile_circuit
from .linalg import Tolerance
from .semantics import Mode, denote, denote_basis, superoperator_of
from .symmetry import invert, noop_on, noop_on_source, realize
from .validity import circuits_equivalent, is_self_inverse, is_valid, semantics_agree

__version__ = "0.1.0"
