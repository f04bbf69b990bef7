"""Exact solution counting for the paired Diophantine system and related finite checks."""
from .energy import (
    PackedLayout,
    SurfacePoint,
    brute_force_energy,
    energy_count,
    energy_from_vectors,
    point_array,
    surface_points,
)
from .fit import fit_exponent
from .geometry import (
    OverlapReport,
    strip_energy,
    strip_energy_formula,
    strip_points,
    transversality_overlap,
)
from .parabolic import divisor_table, fast_count_parabolic, y_solutions
from .records import CountRecord, Method, append_csv, read_csv

__all__ = [
    "CountRecord", "Method", "OverlapReport", "PackedLayout", "SurfacePoint",
    "append_csv", "brute_force_energy", "divisor_table", "energy_count",
    "energy_from_vectors", "fast_count_parabolic", "fit_exponent", "point_array",
    "read_csv", "strip_energy", "strip_energy_formula", "strip_points",
    "surface_points", "transversality_overlap", "y_solutions",
]
