"""Exact two-phase Grover simulator on the four-class symmetric subspace.

Both oracles and the reflection about the uniform state preserve the
span of the four uniform superpositions over the partition classes, so
the full dynamics reduces to four complex amplitudes regardless of how
large the search space is.  Per-item amplitude within class X is
``amp_X / sqrt(|X|)``.

Reflections are applied literally as ``1 - 2|pivot><pivot|`` (overall
sign kept); distance-based harnesses rely on this convention matching
the dense simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import base_angles
from .core import AngleSet, ClassSizes, PhaseSchedule

__all__ = [
    "ReducedState",
    "TrajectoryPoint",
    "SymmetricSplit",
    "init_uniform",
    "apply_oracle",
    "apply_diffusion",
    "success_probability",
    "run_schedule",
    "symmetric_split",
    "measure_decomposition",
]

_NORM_TOL = 1e-9
_HALF_PI = math.pi / 2.0

#: Class order used for vectors: both, first-only, second-only, neither.
_FIELDS = ("amp_a", "amp_minus", "amp_plus", "amp_ell")


@dataclass(frozen=True)
class ReducedState:
    """Amplitudes of the four class-uniform superpositions."""

    amp_a: complex
    amp_minus: complex
    amp_plus: complex
    amp_ell: complex
    sizes: ClassSizes

    def __post_init__(self) -> None:
        for name, count in zip(_FIELDS, self.sizes.as_tuple()):
            if count == 0 and getattr(self, name) != 0:
                raise ValueError(f"{name} must be exactly 0 for an empty class")
        norm = math.sqrt(sum(abs(getattr(self, name)) ** 2 for name in _FIELDS))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {norm!r} is not 1")

    @property
    def vector(self) -> np.ndarray:
        return np.array(
            [self.amp_a, self.amp_minus, self.amp_plus, self.amp_ell], dtype=complex
        )

    def replace_amplitudes(self, vec: np.ndarray) -> "ReducedState":
        return ReducedState(
            amp_a=complex(vec[0]),
            amp_minus=complex(vec[1]),
            amp_plus=complex(vec[2]),
            amp_ell=complex(vec[3]),
            sizes=self.sizes,
        )


@dataclass(frozen=True)
class TrajectoryPoint:
    """One recorded step of a run: probabilities w.r.t. both oracles."""

    step: int
    phase: str
    p_first: float
    p_second: float
    state: ReducedState


@dataclass(frozen=True)
class SymmetricSplit:
    """Projections of a state onto the second oracle's symmetric pair.

    w_coef / l_coef are the (complex, signed) coefficients along the
    uniform superpositions over the second winning and losing sets;
    perp_w / perp_l are the remaining class-amplitude vectors inside the
    winning and losing subspaces.
    """

    w_coef: complex
    l_coef: complex
    perp_w: np.ndarray
    perp_l: np.ndarray

    @property
    def perp_w_norm(self) -> float:
        return float(np.linalg.norm(self.perp_w))

    @property
    def perp_l_norm(self) -> float:
        return float(np.linalg.norm(self.perp_l))


def init_uniform(sizes: ClassSizes) -> ReducedState:
    """Uniform superposition over the whole search space."""
    total = sizes.total
    return ReducedState(
        amp_a=math.sqrt(sizes.n_a / total),
        amp_minus=math.sqrt(sizes.n_minus / total),
        amp_plus=math.sqrt(sizes.n_plus / total),
        amp_ell=math.sqrt(sizes.n_ell / total),
        sizes=sizes,
    )


def apply_oracle(state: ReducedState, which: str) -> ReducedState:
    """Phase-flip the classes the selected oracle marks winning."""
    if which == "first":
        return ReducedState(
            amp_a=-state.amp_a,
            amp_minus=-state.amp_minus,
            amp_plus=state.amp_plus,
            amp_ell=state.amp_ell,
            sizes=state.sizes,
        )
    if which == "second":
        return ReducedState(
            amp_a=-state.amp_a,
            amp_minus=state.amp_minus,
            amp_plus=-state.amp_plus,
            amp_ell=state.amp_ell,
            sizes=state.sizes,
        )
    raise ValueError(f"which must be 'first' or 'second', got {which!r}")


def apply_diffusion(state: ReducedState, pivot: ReducedState) -> ReducedState:
    """Reflection 1 - 2|pivot><pivot| applied to the state."""
    if state.sizes != pivot.sizes:
        raise ValueError("state and pivot describe different partitions")
    pv = pivot.vector
    norm = np.linalg.norm(pv)
    if abs(norm - 1.0) > _NORM_TOL:
        raise ValueError(f"pivot norm {norm!r} is not 1")
    sv = state.vector
    overlap = np.vdot(pv, sv)
    return state.replace_amplitudes(sv - 2.0 * overlap * pv)


def success_probability(state: ReducedState, which: str) -> float:
    """Total weight on the selected oracle's winning classes."""
    if which == "first":
        return abs(state.amp_a) ** 2 + abs(state.amp_minus) ** 2
    if which == "second":
        return abs(state.amp_a) ** 2 + abs(state.amp_plus) ** 2
    raise ValueError(f"which must be 'first' or 'second', got {which!r}")


def run_schedule(sizes: ClassSizes, schedule: PhaseSchedule) -> list[TrajectoryPoint]:
    """Run k_first Grover iterations with the first oracle, then j_second
    with the second, reflecting about the initial uniform state throughout.

    Returns one point per step including step 0 (the initial state).
    """
    pivot = init_uniform(sizes)
    state = pivot
    points = [_point(0, "init", state)]
    for step in range(1, schedule.total + 1):
        which = "first" if step <= schedule.k_first else "second"
        state = apply_diffusion(apply_oracle(state, which), pivot)
        points.append(_point(step, which, state))
    return points


def symmetric_split(state: ReducedState) -> SymmetricSplit:
    """Split a state along the second oracle's winning/losing uniforms."""
    sizes = state.sizes
    total_w = sizes.n_second
    total_l = sizes.n_minus + sizes.n_ell
    vec = state.vector
    win = np.array([vec[0], 0.0, vec[2], 0.0], dtype=complex)
    lose = np.array([0.0, vec[1], 0.0, vec[3]], dtype=complex)
    if total_w:
        w_dir = np.array(
            [math.sqrt(sizes.n_a), 0.0, math.sqrt(sizes.n_plus), 0.0], dtype=complex
        ) / math.sqrt(total_w)
        w_coef = complex(np.vdot(w_dir, win))
        perp_w = win - w_coef * w_dir
    else:
        w_coef = 0.0 + 0.0j
        perp_w = win
    if total_l:
        l_dir = np.array(
            [0.0, math.sqrt(sizes.n_minus), 0.0, math.sqrt(sizes.n_ell)], dtype=complex
        ) / math.sqrt(total_l)
        l_coef = complex(np.vdot(l_dir, lose))
        perp_l = lose - l_coef * l_dir
    else:
        l_coef = 0.0 + 0.0j
        perp_l = lose
    return SymmetricSplit(w_coef=w_coef, l_coef=l_coef, perp_w=perp_w, perp_l=perp_l)


def measure_decomposition(state: ReducedState) -> AngleSet:
    """Empirical angles of a state relative to the second oracle.

    Angles are built from projection magnitudes, so they land in
    [0, pi/2]; chi defaults to pi/2 when the state is fully symmetric.
    """
    sizes = state.sizes
    split = symmetric_split(state)
    sin_alpha = math.hypot(abs(state.amp_a), abs(state.amp_minus))
    cos_alpha = math.hypot(abs(state.amp_plus), abs(state.amp_ell))
    alpha = math.atan2(sin_alpha, cos_alpha)
    cos_eps = math.hypot(abs(split.w_coef), abs(split.l_coef))
    sin_eps = math.hypot(split.perp_w_norm, split.perp_l_norm)
    phi = math.atan2(abs(split.w_coef), abs(split.l_coef))
    epsilon = math.atan2(sin_eps, cos_eps)
    chi = _HALF_PI if sin_eps <= 1e-15 else math.atan2(split.perp_w_norm, split.perp_l_norm)
    rest = sizes.n_plus + sizes.n_ell
    beta = math.asin(math.sqrt(sizes.n_plus / rest)) if rest else 0.0
    nu_tilde, nu = base_angles(sizes)
    return AngleSet(
        nu_tilde=nu_tilde,
        nu=nu,
        alpha=alpha,
        beta=beta,
        phi=phi,
        epsilon=epsilon,
        chi=chi,
        delta=0.0,
    )


def _point(step: int, phase: str, state: ReducedState) -> TrajectoryPoint:
    return TrajectoryPoint(
        step=step,
        phase=phase,
        p_first=success_probability(state, "first"),
        p_second=success_probability(state, "second"),
        state=state,
    )
