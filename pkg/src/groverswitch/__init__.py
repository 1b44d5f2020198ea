"""Exact numerical laboratory for Grover search with a mid-run oracle change."""

from .core import (
    AngleSet,
    ClassSizes,
    CrossCheckError,
    GeometryError,
    PhaseSchedule,
    SuccessReport,
    class_sizes_from_sets,
    large_overlap,
    overlap_probability_shift,
    synthetic_sets,
)

__version__ = "0.1.0"

__all__ = [
    "AngleSet",
    "ClassSizes",
    "CrossCheckError",
    "GeometryError",
    "PhaseSchedule",
    "SuccessReport",
    "class_sizes_from_sets",
    "large_overlap",
    "overlap_probability_shift",
    "synthetic_sets",
    "__version__",
]
