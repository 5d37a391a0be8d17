"""Entanglement monotones, two-atom cavity dynamics, complementarity relations,
and a stabilizer / hidden-variable dual simulator for Clifford circuits."""

from . import complement, densecore, harness, lattice, lhvcomm, monotones, stabilizer, stateio, tcm
from .harness import Circuit, DiffReport, build_cluster_circuit, build_ghz_circuit, dual_run, parse_circuit
from .lhvcomm import LHVTable, SignPattern, new_table
from .stabilizer import PauliString, Prediction, Tableau, new_tableau

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "DiffReport",
    "LHVTable",
    "PauliString",
    "Prediction",
    "SignPattern",
    "Tableau",
    "build_cluster_circuit",
    "build_ghz_circuit",
    "complement",
    "densecore",
    "dual_run",
    "harness",
    "lattice",
    "lhvcomm",
    "monotones",
    "new_table",
    "new_tableau",
    "parse_circuit",
    "stabilizer",
    "stateio",
    "tcm",
]
