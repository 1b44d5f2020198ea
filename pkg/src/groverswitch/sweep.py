"""Query-allocation sweeps over the two phases.

With overlapping-but-not-contained winning sets, part of the amplitude
built up in the first phase gets stranded in a component the second
phase cannot amplify, so spending fewer first-phase queries can win.
These sweeps make that trade-off explicit on the integer grid.
"""

from __future__ import annotations

import math

import numpy as np

from .analytic import alpha_after, base_angles, boundary_decomposition
from .core import ClassSizes, PhaseSchedule
from .reduced import run_schedule

__all__ = ["GRID_CAP", "sweep_grid", "best_first_phase", "switch_criterion"]

#: Largest (k_max+1) * (j_max+1) grid swept exhaustively.
GRID_CAP = 10**6


def sweep_grid(sizes: ClassSizes, k_max: int, j_max: int) -> np.ndarray:
    """Final success p[k', j] for every allocation k' <= k_max, j <= j_max.

    Entry (k', j) is the second-oracle success after k' first-phase and
    j second-phase Grover iterations, from the exact reduced simulator.
    """
    if k_max < 0 or j_max < 0:
        raise ValueError("k_max and j_max must be >= 0")
    cells = (k_max + 1) * (j_max + 1)
    if cells > GRID_CAP:
        raise ValueError(f"grid of {cells} cells exceeds the cap {GRID_CAP}")
    grid = np.empty((k_max + 1, j_max + 1), dtype=float)
    for k_prime in range(k_max + 1):
        trajectory = run_schedule(sizes, PhaseSchedule(k_prime, j_max))
        grid[k_prime, :] = [
            trajectory[k_prime + j].p_second for j in range(j_max + 1)
        ]
    return grid


def best_first_phase(sizes: ClassSizes, j: int, k_max: int) -> tuple[int, float]:
    """Allocation k' <= k_max maximizing success for a fixed j.

    Ties break toward smaller k' (fewer first-oracle queries).
    """
    column = sweep_grid(sizes, k_max, j)[:, j]
    k_star = int(np.argmax(column))
    return k_star, float(column[k_star])


def switch_criterion(sizes: ClassSizes, k: int, j: int) -> bool:
    """Whether k first-phase queries over-commit for a j-query second phase.

    True when sin^2(chi(k)) < sin^2(2*j*nu + phi(k)): the stranded
    component's winning fraction falls short of what the symmetric
    component alone would reach, so some k' < k does better.
    """
    nu_tilde, nu = base_angles(sizes)
    alpha, in_window = alpha_after(k, nu_tilde)
    if not in_window:
        raise ValueError(
            f"k = {k} over-rotates the first phase (alpha > pi/2); "
            "the boundary angles are not defined there"
        )
    angles = boundary_decomposition(alpha, sizes)
    return math.sin(angles.chi) ** 2 < math.sin(2.0 * j * nu + angles.phi) ** 2
