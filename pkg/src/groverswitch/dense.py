"""Dense state-vector simulator over explicit item sets.

The brute-force reference for everything else: states are length-N
complex vectors, oracles are sign masks, and the Grover reflection is
applied as ``1 - 2|pivot><pivot|`` in O(N) without materializing a
matrix.  Arbitrary-unitary strategies are supported up to a small cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ClassSizes, PhaseSchedule, class_sizes_from_sets

__all__ = [
    "DENSE_TRAJECTORY_CAP",
    "DENSE_UNITARY_CAP",
    "FullState",
    "DenseTrajectoryPoint",
    "uniform_state",
    "apply_phase_oracle",
    "apply_reflection",
    "apply_unitary",
    "success_probability",
    "run_grover_schedule",
]

#: Largest N for Grover-only trajectories (vector fast path).
DENSE_TRAJECTORY_CAP = 4096

#: Largest N for arbitrary-unitary evolution (matrix-vector products).
DENSE_UNITARY_CAP = 256

_NORM_TOL = 1e-12
_UNITARY_TOL = 1e-10


@dataclass(eq=False)
class FullState:
    """A normalized amplitude vector plus the two winning sets."""

    amplitudes: np.ndarray
    winning_tilde: frozenset[int]
    winning: frozenset[int]

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 1 or self.amplitudes.size < 1:
            raise ValueError("amplitudes must be a non-empty 1-D vector")
        n = self.amplitudes.size
        self.winning_tilde = frozenset(self.winning_tilde)
        self.winning = frozenset(self.winning)
        for label, items in (("winning_tilde", self.winning_tilde), ("winning", self.winning)):
            for item in items:
                if not isinstance(item, int) or not (0 <= item < n):
                    raise ValueError(f"{label} contains out-of-range item {item!r}")
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm!r} is not 1")

    @property
    def n_items(self) -> int:
        return self.amplitudes.size

    def class_sizes(self) -> ClassSizes:
        return class_sizes_from_sets(self.winning_tilde, self.winning, self.n_items)

    def with_amplitudes(self, amplitudes: np.ndarray) -> "FullState":
        return FullState(
            amplitudes=amplitudes,
            winning_tilde=self.winning_tilde,
            winning=self.winning,
        )


@dataclass(frozen=True)
class DenseTrajectoryPoint:
    step: int
    phase: str
    p_first: float
    p_second: float


def uniform_state(n_items: int, winning_tilde, winning) -> FullState:
    """Uniform superposition over n_items with the given winning sets."""
    if n_items < 1:
        raise ValueError(f"n_items must be >= 1, got {n_items!r}")
    amps = np.full(n_items, 1.0 / math.sqrt(n_items), dtype=complex)
    return FullState(amplitudes=amps, winning_tilde=winning_tilde, winning=winning)


def _mask(state: FullState, which: str) -> np.ndarray:
    if which == "first":
        items = state.winning_tilde
    elif which == "second":
        items = state.winning
    else:
        raise ValueError(f"which must be 'first' or 'second', got {which!r}")
    mask = np.zeros(state.n_items, dtype=bool)
    if items:
        mask[sorted(items)] = True
    return mask


def apply_phase_oracle(state: FullState, which: str) -> FullState:
    """Sign-flip the amplitudes of the selected winning set."""
    signs = np.where(_mask(state, which), -1.0, 1.0)
    return state.with_amplitudes(state.amplitudes * signs)


def apply_reflection(state: FullState, pivot: np.ndarray) -> FullState:
    """Reflection 1 - 2|pivot><pivot| applied in O(N)."""
    pivot = np.asarray(pivot, dtype=complex)
    if pivot.shape != state.amplitudes.shape:
        raise ValueError("pivot dimension does not match the state")
    if abs(np.linalg.norm(pivot) - 1.0) > 1e-9:
        raise ValueError("pivot is not normalized")
    overlap = np.vdot(pivot, state.amplitudes)
    return state.with_amplitudes(state.amplitudes - 2.0 * overlap * pivot)


def apply_unitary(state: FullState, u: np.ndarray) -> FullState:
    """Apply an explicit unitary matrix (capped at DENSE_UNITARY_CAP)."""
    n = state.n_items
    if n > DENSE_UNITARY_CAP:
        raise ValueError(f"N = {n} exceeds the arbitrary-unitary cap {DENSE_UNITARY_CAP}")
    u = np.asarray(u, dtype=complex)
    if u.shape != (n, n):
        raise ValueError(f"unitary shape {u.shape} does not match N = {n}")
    if not np.allclose(u @ u.conj().T, np.eye(n), atol=_UNITARY_TOL):
        raise ValueError("matrix is not unitary within tolerance")
    return state.with_amplitudes(u @ state.amplitudes)


def success_probability(state: FullState, which: str) -> float:
    """Total weight on the selected winning set."""
    return float(np.sum(np.abs(state.amplitudes[_mask(state, which)]) ** 2))


def run_grover_schedule(
    n_items: int,
    winning_tilde,
    winning,
    schedule: PhaseSchedule,
) -> tuple[list[DenseTrajectoryPoint], FullState]:
    """Dense counterpart of :func:`groverswitch.reduced.run_schedule`.

    Returns the per-step probability trajectory (step 0 included) and
    the final state.
    """
    if n_items > DENSE_TRAJECTORY_CAP:
        raise ValueError(
            f"N = {n_items} exceeds the dense trajectory cap {DENSE_TRAJECTORY_CAP}"
        )
    state = uniform_state(n_items, winning_tilde, winning)
    pivot = state.amplitudes.copy()
    first_mask = _mask(state, "first")
    second_mask = _mask(state, "second")
    amps = state.amplitudes.copy()

    def probs(a: np.ndarray) -> tuple[float, float]:
        w = np.abs(a) ** 2
        return float(w[first_mask].sum()), float(w[second_mask].sum())

    p1, p2 = probs(amps)
    points = [DenseTrajectoryPoint(step=0, phase="init", p_first=p1, p_second=p2)]
    for step in range(1, schedule.total + 1):
        phase = "first" if step <= schedule.k_first else "second"
        mask = first_mask if phase == "first" else second_mask
        amps = np.where(mask, -amps, amps)
        amps = amps - 2.0 * np.vdot(pivot, amps) * pivot
        p1, p2 = probs(amps)
        points.append(DenseTrajectoryPoint(step=step, phase=phase, p_first=p1, p_second=p2))
    return points, state.with_amplitudes(amps)
