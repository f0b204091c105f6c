"""Verification lab for Kapustin-Witten fields with Nahm pole data on S^3 x R+."""

from .forms import GeometryConventions, calibrate
from .profiles import (
    InvariantField,
    nahm_pole_invariant_solution,
    nahm_pole_invariant_solution_alt,
)

__all__ = [
    "GeometryConventions",
    "calibrate",
    "InvariantField",
    "nahm_pole_invariant_solution",
    "nahm_pole_invariant_solution_alt",
]

__version__ = "0.1.0"
