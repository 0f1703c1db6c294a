"""Low-space simulation of multitape Turing machines.

A time-t run is reduced to a family of implicitly defined tree-evaluation
instances (one per candidate block-movement encoding); each instance is
solvable by a catalytic procedure whose working storage grows like the
square root of t rather than linearly. A direct simulator provides the
correctness oracle and a space meter verifies the storage accounting.
"""

__version__ = "0.1.0"

from .machine import parse_machine, parse_machine_file, run_direct
from .reduction import simulate_space_efficient, sweep_row
from .treeval import solve_cook_mertz, solve_naive

__all__ = [
    "parse_machine",
    "parse_machine_file",
    "run_direct",
    "simulate_space_efficient",
    "solve_cook_mertz",
    "solve_naive",
    "sweep_row",
]
