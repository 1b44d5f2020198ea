"""Numerical certification of the query-optimality bounds.

Three harnesses, all exact (no sampling):

* permutation averaging: a strategy conditioned on a permutation-label
  register has the same success probability for every relabeling of the
  items, equal to the plain strategy's success averaged over all N!
  relabelings.  Materialized explicitly for small N.
* the two-sided distance-sum chain: for any strategy with J queries and
  any family of n-item oracles,

      2D - 2D*sqrt(p*n/N) - 2D*sqrt((1-p)*(1-n/N))
          <= sum_y || phi_J - phi_J^y ||^2  <=  4D * sin^2(J*nu)

  with D = C(N, n), sin^2(nu) = n/N, phi_J the evolution under an empty
  oracle, phi_J^y under oracle y, and p the average identification
  probability.  Grover iterations saturate both sides inside the
  rotation window.
* the single-oracle optimality window scan: simulated Grover success
  equals sin^2((2k+1)*nu) for every k, and the window flag marks where
  that value is also optimal.

"Empty oracle" always means the identity oracle with the *same*
interleaved unitaries and sign conventions; the saturation identities
are phase-sensitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .core import ClassSizes, CrossCheckError, PhaseSchedule, clamp_probability
from . import reduced

__all__ = [
    "ORACLE_ENUM_CAP",
    "AVERAGED_ITEM_CAP",
    "PermutationStrategy",
    "BoundReport",
    "WindowPoint",
    "random_unitary",
    "random_strategy",
    "grover_strategy",
    "plain_strategy_success",
    "average_strategy_success",
    "mean_strategy_success",
    "zalka_distance_sum",
    "zalka_lower_bound",
    "zalka_rhs",
    "zalka_bounds",
    "lemma2_window_scan",
]

#: Largest oracle family C(N, n) the distance-sum harness will enumerate.
ORACLE_ENUM_CAP = 100_000

#: Largest N for which the N!-dimensional averaging register is materialized.
AVERAGED_ITEM_CAP = 5

_UNITARY_TOL = 1e-10
_SATURATION_TOL = 1e-9


@dataclass(frozen=True)
class PermutationStrategy:
    """A pure-state query strategy: initial state plus one unitary per query.

    The ancilla register is folded into the state as a trailing tensor
    factor of dimension ``ancilla_dim``.  With ``averaged`` set, the
    strategy is meant for the permutation-averaging harness, which
    attaches an N!-dimensional label register (hence the small-N cap).
    """

    base_initial: np.ndarray
    base_unitaries: tuple[np.ndarray, ...]
    n_items: int
    ancilla_dim: int = 1
    averaged: bool = False

    def __post_init__(self) -> None:
        dim = self.n_items * self.ancilla_dim
        initial = np.asarray(self.base_initial, dtype=complex)
        if initial.shape != (dim,):
            raise ValueError(f"initial state must have dimension {dim}")
        if abs(np.linalg.norm(initial) - 1.0) > 1e-9:
            raise ValueError("initial state is not normalized")
        unitaries = tuple(np.asarray(u, dtype=complex) for u in self.base_unitaries)
        for u in unitaries:
            if u.shape != (dim, dim):
                raise ValueError(f"unitaries must be {dim}x{dim}")
            if not np.allclose(u @ u.conj().T, np.eye(dim), atol=_UNITARY_TOL):
                raise ValueError("strategy unitary is not unitary within tolerance")
        if self.averaged and self.n_items > AVERAGED_ITEM_CAP:
            raise ValueError(
                f"averaged strategies are capped at N = {AVERAGED_ITEM_CAP} "
                f"(register dimension N * N!), got N = {self.n_items}"
            )
        object.__setattr__(self, "base_initial", initial)
        object.__setattr__(self, "base_unitaries", unitaries)

    @property
    def queries(self) -> int:
        return len(self.base_unitaries)

    @property
    def register_dim(self) -> int:
        dim = self.n_items * self.ancilla_dim
        return dim * math.factorial(self.n_items) if self.averaged else dim


@dataclass(frozen=True)
class BoundReport:
    """One verified instance of the distance-sum inequality chain."""

    lhs: float
    middle: float
    rhs: float
    measured_p: float
    n_items: int
    winning_size: int
    oracle_count: int
    queries: int
    saturated_lhs: bool
    saturated_rhs: bool

    def __post_init__(self) -> None:
        if self.lhs > self.middle + _SATURATION_TOL:
            raise CrossCheckError(
                f"lower bound violated: lhs {self.lhs!r} > middle {self.middle!r}"
            )
        if self.middle > self.rhs + _SATURATION_TOL:
            raise CrossCheckError(
                f"upper bound violated: middle {self.middle!r} > rhs {self.rhs!r}"
            )


@dataclass(frozen=True)
class WindowPoint:
    """One row of the single-oracle optimality window scan."""

    k: int
    simulated: float
    predicted: float
    in_window: bool


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases[np.newaxis, :]


def random_strategy(
    n_items: int,
    queries: int,
    rng: np.random.Generator,
    ancilla_dim: int = 1,
    averaged: bool = False,
) -> PermutationStrategy:
    """Random initial state and Haar-random unitaries."""
    dim = n_items * ancilla_dim
    initial = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    initial /= np.linalg.norm(initial)
    unitaries = tuple(random_unitary(dim, rng) for _ in range(queries))
    return PermutationStrategy(
        base_initial=initial,
        base_unitaries=unitaries,
        n_items=n_items,
        ancilla_dim=ancilla_dim,
        averaged=averaged,
    )


def grover_strategy(n_items: int, queries: int) -> PermutationStrategy:
    """Uniform start and reflections about it (no ancilla)."""
    uniform = np.full(n_items, 1.0 / math.sqrt(n_items), dtype=complex)
    reflection = np.eye(n_items, dtype=complex) - 2.0 * np.outer(uniform, uniform.conj())
    return PermutationStrategy(
        base_initial=uniform,
        base_unitaries=(reflection,) * queries,
        n_items=n_items,
    )


def _default_sets(strategy: PermutationStrategy, winning_size: int, step_sets, final_set):
    if not 0 <= winning_size <= strategy.n_items:
        raise ValueError(f"winning_size {winning_size!r} outside 0..{strategy.n_items}")
    base = frozenset(range(winning_size))
    if step_sets is None:
        step_sets = [base] * strategy.queries
    step_sets = [frozenset(s) for s in step_sets]
    if len(step_sets) != strategy.queries:
        raise ValueError("need exactly one winning set per query")
    final = base if final_set is None else frozenset(final_set)
    return step_sets, final


def _identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def _apply_sigma(sets, sigma):
    return [frozenset(sigma[i] for i in s) for s in sets]


def _flip(vec: np.ndarray, items, n_items: int, ancilla_dim: int) -> np.ndarray:
    out = vec.copy().reshape(n_items, ancilla_dim)
    if items:
        out[sorted(items), :] *= -1.0
    return out.reshape(-1)


def _winning_weight(vec: np.ndarray, items, n_items: int, ancilla_dim: int) -> float:
    w = np.abs(vec.reshape(n_items, ancilla_dim)) ** 2
    return float(w[sorted(items), :].sum()) if items else 0.0


def _permute(vec: np.ndarray, sigma, n_items: int, ancilla_dim: int) -> np.ndarray:
    """|i, t> -> |sigma(i), t>."""
    arr = vec.reshape(n_items, ancilla_dim)
    out = np.empty_like(arr)
    out[np.asarray(sigma), :] = arr
    return out.reshape(-1)


def _permute_inverse(vec: np.ndarray, sigma, n_items: int, ancilla_dim: int) -> np.ndarray:
    arr = vec.reshape(n_items, ancilla_dim)
    return arr[np.asarray(sigma), :].reshape(-1)


def plain_strategy_success(
    strategy: PermutationStrategy,
    winning_size: int,
    sigma=None,
    *,
    step_sets=None,
    final_set=None,
) -> float:
    """Success of the bare strategy when all oracles are relabeled by sigma."""
    n, b = strategy.n_items, strategy.ancilla_dim
    sigma = _identity(n) if sigma is None else tuple(sigma)
    step_sets, final = _default_sets(strategy, winning_size, step_sets, final_set)
    perm_steps = _apply_sigma(step_sets, sigma)
    perm_final = frozenset(sigma[i] for i in final)
    vec = strategy.base_initial
    for u, marked in zip(strategy.base_unitaries, perm_steps):
        vec = u @ _flip(vec, marked, n, b)
    return clamp_probability(_winning_weight(vec, perm_final, n, b), "strategy success")


def average_strategy_success(
    strategy: PermutationStrategy,
    winning_size: int,
    sigma=None,
    *,
    step_sets=None,
    final_set=None,
) -> float:
    """Success of the permutation-averaged strategy under relabeling sigma.

    The label register is materialized as one evolution block per
    permutation gamma: block gamma starts in sigma_gamma^dagger applied
    to the base initial state and conjugates every unitary by
    sigma_gamma, while the (relabeled) oracles act identically on all
    blocks.  The result is the exact success probability of the averaged
    strategy on the N * N!-dimensional register.
    """
    if not strategy.averaged:
        raise ValueError("strategy was not built with averaged=True")
    n, b = strategy.n_items, strategy.ancilla_dim
    sigma = _identity(n) if sigma is None else tuple(sigma)
    step_sets, final = _default_sets(strategy, winning_size, step_sets, final_set)
    perm_steps = _apply_sigma(step_sets, sigma)
    perm_final = frozenset(sigma[i] for i in final)
    total = 0.0
    count = 0
    for gamma in permutations(range(n)):
        vec = _permute_inverse(strategy.base_initial, gamma, n, b)
        for u, marked in zip(strategy.base_unitaries, perm_steps):
            vec = _flip(vec, marked, n, b)
            vec = _permute_inverse(u @ _permute(vec, gamma, n, b), gamma, n, b)
        total += _winning_weight(vec, perm_final, n, b)
        count += 1
    return clamp_probability(total / count, "averaged strategy success")


def mean_strategy_success(
    strategy: PermutationStrategy,
    winning_size: int,
    *,
    step_sets=None,
    final_set=None,
) -> float:
    """Plain success averaged over all N! relabelings, by enumeration."""
    n = strategy.n_items
    total = 0.0
    count = 0
    for sigma in permutations(range(n)):
        total += plain_strategy_success(
            strategy, winning_size, sigma, step_sets=step_sets, final_set=final_set
        )
        count += 1
    return total / count


def _oracle_family(n_items: int, winning_size: int):
    count = math.comb(n_items, winning_size)
    if count > ORACLE_ENUM_CAP:
        raise ValueError(
            f"C({n_items}, {winning_size}) = {count} oracles exceeds the "
            f"enumeration cap {ORACLE_ENUM_CAP}"
        )
    return combinations(range(n_items), winning_size)


def zalka_distance_sum(strategy: PermutationStrategy, winning_size: int) -> float:
    """sum over all C(N, n) oracles of || phi_J - phi_J^y ||^2."""
    n, b = strategy.n_items, strategy.ancilla_dim
    empty = strategy.base_initial
    for u in strategy.base_unitaries:
        empty = u @ empty
    total = 0.0
    for marked in _oracle_family(n, winning_size):
        vec = strategy.base_initial
        for u in strategy.base_unitaries:
            vec = u @ _flip(vec, marked, n, b)
        diff = empty - vec
        total += float(np.real(np.vdot(diff, diff)))
    return total


def zalka_lower_bound(measured_p: float, n_items: int, winning_size: int) -> float:
    """2D - 2D*sqrt(p*n/N) - 2D*sqrt((1-p)*(1-n/N))."""
    if not 0.0 <= measured_p <= 1.0:
        raise ValueError(f"measured_p = {measured_p!r} outside [0, 1]")
    ratio = winning_size / n_items
    d = math.comb(n_items, winning_size)
    return 2.0 * d * (
        1.0
        - math.sqrt(measured_p * ratio)
        - math.sqrt((1.0 - measured_p) * (1.0 - ratio))
    )


def zalka_rhs(n_items: int, winning_size: int, queries: int) -> float:
    """4D * sin^2(J*nu) with sin^2(nu) = n/N."""
    d = math.comb(n_items, winning_size)
    nu = math.asin(math.sqrt(winning_size / n_items))
    return 4.0 * d * math.sin(queries * nu) ** 2


def zalka_bounds(strategy: PermutationStrategy, winning_size: int) -> BoundReport:
    """Evaluate the full chain for one strategy and one oracle family.

    The measured p is the computational-basis identification success of
    phi_J^y averaged over all oracles y -- a lower bound on the optimal
    measurement, which keeps the left inequality conservative.
    """
    n, b = strategy.n_items, strategy.ancilla_dim
    d = math.comb(n, winning_size)
    middle = zalka_distance_sum(strategy, winning_size)
    total_p = 0.0
    for marked in _oracle_family(n, winning_size):
        vec = strategy.base_initial
        for u in strategy.base_unitaries:
            vec = u @ _flip(vec, marked, n, b)
        total_p += _winning_weight(vec, marked, n, b)
    measured_p = clamp_probability(total_p / d, "measured p")
    lhs = zalka_lower_bound(measured_p, n, winning_size)
    rhs = zalka_rhs(n, winning_size, strategy.queries)
    return BoundReport(
        lhs=lhs,
        middle=middle,
        rhs=rhs,
        measured_p=measured_p,
        n_items=n,
        winning_size=winning_size,
        oracle_count=d,
        queries=strategy.queries,
        saturated_lhs=abs(middle - lhs) <= _SATURATION_TOL,
        saturated_rhs=abs(rhs - middle) <= _SATURATION_TOL,
    )


def lemma2_window_scan(
    n_items: int, winning_size: int, k_max: int
) -> list[WindowPoint]:
    """Scan single-oracle Grover against sin^2((2k+1)*nu) for k = 0..k_max.

    The rotation identity holds for every k; the window flag marks
    (2k+1)*nu <= pi/2, the regime where the value is also a ceiling for
    arbitrary strategies.  Raises if simulation and closed form disagree
    in-window beyond 1e-10.
    """
    if not 1 <= winning_size <= n_items:
        raise ValueError("need 1 <= winning_size <= n_items")
    sizes = ClassSizes(
        n_a=winning_size, n_minus=0, n_plus=0, n_ell=n_items - winning_size
    )
    nu = math.asin(math.sqrt(winning_size / n_items))
    trajectory = reduced.run_schedule(sizes, PhaseSchedule(k_max, 0))
    points = []
    for k in range(k_max + 1):
        simulated = trajectory[k].p_first
        predicted = math.sin((2 * k + 1) * nu) ** 2
        in_window = (2 * k + 1) * nu <= math.pi / 2.0 + 1e-12
        if in_window and abs(simulated - predicted) > 1e-10:
            raise CrossCheckError(
                f"in-window mismatch at k={k}: simulated {simulated!r} "
                f"vs predicted {predicted!r}"
            )
        points.append(
            WindowPoint(k=k, simulated=simulated, predicted=predicted, in_window=in_window)
        )
    return points
