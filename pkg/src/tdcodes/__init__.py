"""Topological defect-network codes: lattices, stabilizers, preparation circuits and checks."""

from .circuit import (
    Circuit,
    Gate,
    Layer,
    preparation_circuit,
    read_circuit,
    seed_entangler,
    seed_plan,
    seed_set,
    synth_uc,
    synth_ug,
    truncate_uc,
    write_circuit,
)
from .css import CssCode, PrepPlan, find_seeds, from_td, greedy_plan, load_css, synth_prep
from .gf2 import BitMatrix, rank, rref
from .lattice import Cube, Lattice, LatticeSpec, make_lattice
from .model import TdModel, TdParams, build_model, log2_gsd, seed_count
from .pauli import PauliOp
from .tableau import Tableau, run, states_equal, verify_code_state

__all__ = [
    "BitMatrix",
    "Circuit",
    "CssCode",
    "Cube",
    "Gate",
    "Lattice",
    "LatticeSpec",
    "Layer",
    "PauliOp",
    "PrepPlan",
    "Tableau",
    "TdModel",
    "TdParams",
    "build_model",
    "find_seeds",
    "from_td",
    "greedy_plan",
    "load_css",
    "log2_gsd",
    "make_lattice",
    "preparation_circuit",
    "rank",
    "read_circuit",
    "rref",
    "run",
    "seed_count",
    "seed_entangler",
    "seed_plan",
    "seed_set",
    "states_equal",
    "synth_prep",
    "synth_uc",
    "synth_ug",
    "truncate_uc",
    "verify_code_state",
    "write_circuit",
]
