"""Exact stabilizer-circuit simulator for qudits of any dimension d >= 2."""

from .modmath import RingParams, ring_params
from .weyl import PauliVector, PhasedWeyl
from .tableau import StabilizerTableau, standard_basis_tableau
from .clifford import ConjugationTableau, GateSpec
from .measurement import MeasurementRecord, OutcomeCoset
from .circuit import CircuitProgram, parse_program, run_program

__version__ = "0.1.0"

__all__ = [
    "RingParams",
    "ring_params",
    "PauliVector",
    "PhasedWeyl",
    "StabilizerTableau",
    "standard_basis_tableau",
    "ConjugationTableau",
    "GateSpec",
    "MeasurementRecord",
    "OutcomeCoset",
    "CircuitProgram",
    "parse_program",
    "run_program",
    "__version__",
]
