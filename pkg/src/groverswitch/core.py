"""Shared value types for two-phase amplitude amplification runs.

A run queries a first oracle for some number of steps and then a second
oracle for the rest.  Every quantity of interest depends on the search
space only through the four-way partition induced by the two winning
sets: items marked by both oracles, by the first only, by the second
only, or by neither.  :class:`ClassSizes` holds those four counts and is
the common currency between the analytic formulas, the simulators, and
the experiment harnesses.

All types are immutable values and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "GeometryError",
    "CrossCheckError",
    "ClassSizes",
    "PhaseSchedule",
    "AngleSet",
    "SuccessReport",
    "clamp_probability",
    "class_sizes_from_sets",
    "synthetic_sets",
    "large_overlap",
    "overlap_probability_shift",
]

#: Excursions beyond [0, 1] smaller than this are treated as rounding.
PROBABILITY_TOL = 1e-12

#: Slack allowed when checking angle ranges.
ANGLE_TOL = 1e-9

_HALF_PI = math.pi / 2.0


class GeometryError(ValueError):
    """A partition/angle combination with no consistent geometry."""


class CrossCheckError(RuntimeError):
    """An internal dual-route consistency check failed beyond tolerance."""


def clamp_probability(value: float, label: str = "probability") -> float:
    """Clamp rounding-level excursions into [0, 1]; larger ones are bugs."""
    if not (-PROBABILITY_TOL <= value <= 1.0 + PROBABILITY_TOL):
        raise CrossCheckError(f"{label} = {value!r} outside [0, 1] beyond tolerance")
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class ClassSizes:
    """Partition counts of the search space under the two oracles.

    n_a:     items marked winning by both oracles
    n_minus: items marked winning only by the first oracle
    n_plus:  items marked winning only by the second oracle
    n_ell:   items marked losing by both oracles
    """

    n_a: int
    n_minus: int
    n_plus: int
    n_ell: int

    def __post_init__(self) -> None:
        for name in ("n_a", "n_minus", "n_plus", "n_ell"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative int, got {value!r}")
        if self.total < 1:
            raise ValueError("partition must contain at least one item")

    @property
    def total(self) -> int:
        """Size of the search space."""
        return self.n_a + self.n_minus + self.n_plus + self.n_ell

    @property
    def n_first(self) -> int:
        """Number of items the first oracle marks winning."""
        return self.n_a + self.n_minus

    @property
    def n_second(self) -> int:
        """Number of items the second oracle marks winning."""
        return self.n_a + self.n_plus

    @property
    def contained(self) -> bool:
        """True when the first winning set is inside the second one."""
        return self.n_minus == 0

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n_a, self.n_minus, self.n_plus, self.n_ell)


@dataclass(frozen=True)
class PhaseSchedule:
    """Query counts for the two phases of a run."""

    k_first: int
    j_second: int

    def __post_init__(self) -> None:
        for name in ("k_first", "j_second"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative int, got {value!r}")

    @property
    def total(self) -> int:
        return self.k_first + self.j_second


@dataclass(frozen=True)
class AngleSet:
    """All angles describing one run, in radians.

    nu_tilde / nu:  uniform-state angles of the first/second winning set
    alpha:          first-oracle winning angle at the phase boundary
    beta:           winning fraction angle of the first oracle's losing set
    phi:            symmetric-component winning angle at the boundary
    epsilon:        weight angle of the non-symmetric boundary component
    chi:            winning fraction angle of that non-symmetric component
    delta:          total second-phase rotation
    """

    nu_tilde: float
    nu: float
    alpha: float
    beta: float
    phi: float
    epsilon: float
    chi: float
    delta: float

    def __post_init__(self) -> None:
        for name in ("nu_tilde", "nu", "alpha", "beta", "phi", "epsilon", "chi"):
            value = getattr(self, name)
            if not (-ANGLE_TOL <= value <= _HALF_PI + ANGLE_TOL):
                raise ValueError(f"{name} = {value!r} outside [0, pi/2]")
        if self.delta < -ANGLE_TOL:
            raise ValueError(f"delta = {self.delta!r} is negative")


@dataclass(frozen=True)
class SuccessReport:
    """Success probabilities of a finished two-phase run.

    upper_bound is the monotone-window ceiling derived from the boundary
    success and angles; under containment it coincides with p_final.
    perp_ceiling is the plateau 1 - sin^2(epsilon) * cos^2(chi) that no
    amount of second-phase amplification can exceed.
    """

    p_first: float
    p_final: float
    p_sym: float
    p_perp: float
    upper_bound: float
    perp_ceiling: float

    def __post_init__(self) -> None:
        for name in ("p_first", "p_final", "p_sym", "p_perp"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} = {value!r} outside [0, 1]")


def class_sizes_from_sets(
    winning_tilde,
    winning,
    universe_size: int,
) -> ClassSizes:
    """Count the four intersection classes of two winning sets.

    Both sets must be subsets of ``range(universe_size)``.
    """
    if not isinstance(universe_size, int) or universe_size < 1:
        raise ValueError(f"universe_size must be a positive int, got {universe_size!r}")
    first = frozenset(winning_tilde)
    second = frozenset(winning)
    for label, items in (("winning_tilde", first), ("winning", second)):
        for item in items:
            if not isinstance(item, int) or not (0 <= item < universe_size):
                raise ValueError(
                    f"{label} contains out-of-range item {item!r} "
                    f"(universe is 0..{universe_size - 1})"
                )
    n_a = len(first & second)
    n_minus = len(first - second)
    n_plus = len(second - first)
    n_ell = universe_size - n_a - n_minus - n_plus
    return ClassSizes(n_a=n_a, n_minus=n_minus, n_plus=n_plus, n_ell=n_ell)


def synthetic_sets(sizes: ClassSizes) -> tuple[frozenset[int], frozenset[int]]:
    """Canonical item sets realizing a partition (inverse of counting).

    Items are laid out as [both | first-only | second-only | neither].
    """
    a_end = sizes.n_a
    minus_end = a_end + sizes.n_minus
    plus_end = minus_end + sizes.n_plus
    first = frozenset(range(minus_end))
    second = frozenset(range(a_end)) | frozenset(range(minus_end, plus_end))
    return first, second


def large_overlap(sizes: ClassSizes) -> bool:
    """Whether boosting the first winning set also boosts the second.

    True iff n_a * n_ell > n_plus * n_minus (strict).
    """
    return sizes.n_a * sizes.n_ell > sizes.n_plus * sizes.n_minus


def overlap_probability_shift(sizes: ClassSizes, scale_w: float) -> float:
    """Second-oracle success after uniformly rescaling first-set probability.

    Each item starts at probability 1/N.  Items of the first winning set
    are rescaled by ``scale_w``; the complementary classes pick up the
    factor (N - scale_w * n_first) / (n_ell + n_plus) so the distribution
    stays normalized.  Returns the resulting probability of hitting the
    second winning set:

        n_plus / (n_ell + n_plus)
          + scale_w * (n_a * n_ell - n_plus * n_minus) / (N * (n_ell + n_plus))
    """
    if not math.isfinite(scale_w) or scale_w < 0.0:
        raise ValueError(f"scale_w must be finite and >= 0, got {scale_w!r}")
    complement = sizes.n_ell + sizes.n_plus
    if complement == 0:
        raise GeometryError("no items outside the first winning set to rebalance")
    if scale_w * sizes.n_first > sizes.total + PROBABILITY_TOL:
        raise ValueError(
            f"scale_w = {scale_w!r} drives the complementary classes negative "
            f"(admissible range is [0, {sizes.total / sizes.n_first!r}])"
            if sizes.n_first
            else "unreachable"
        )
    floor = sizes.n_plus / complement
    slope = (sizes.n_a * sizes.n_ell - sizes.n_plus * sizes.n_minus) / (
        sizes.total * complement
    )
    return clamp_probability(floor + scale_w * slope, "shifted probability")
