"""Deterministic grid worlds compiled into two-oracle search instances.

An episode is a fixed-length action sequence.  Rewards are binary and
goal-absorbing: a sequence wins iff it visits the goal at or before its
final step.  Raising the episode length from m to M then gives nested
winning sets over the length-M sequence space: every sequence whose
length-m prefix wins also wins outright, so the compiled instance always
satisfies containment (n_minus = 0) and feeds straight into the
two-phase machinery.

Map file format: header lines ``m=<int>`` and ``M=<int>`` (in either
order), then the grid rows, one per line, using ``.`` free, ``#`` wall,
``S`` start, ``G`` goal.  Exactly one S and one G; rows must have equal
length.  No comment lines ('#' starts a wall).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .analytic import alpha_after, base_angles, boundary_decomposition, final_probability
from .core import (
    ClassSizes,
    CrossCheckError,
    GeometryError,
    PhaseSchedule,
    SuccessReport,
    clamp_probability,
)
from . import dense, reduced

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "ACTION_MOVES",
    "DEFAULT_ACTIONS",
    "MapFormatError",
    "GridWorld",
    "CompiledInstance",
    "EndToEndResult",
    "step_cell",
    "is_rewarded",
    "compile_instance",
    "end_to_end",
    "parse_map",
    "load_map",
]

#: Row/column displacement of each action.
ACTION_MOVES = {
    "up": (-1, 0),
    "down": (1, 0),
    "left": (0, -1),
    "right": (0, 1),
}

DEFAULT_ACTIONS = ("up", "down", "left", "right")

#: Largest |actions|^M sequence space compiled by default.
DEFAULT_ENUMERATION_CAP = 10**7

#: Explicit winning sets are kept only up to the dense simulator cap.
_EXPLICIT_SET_CAP = dense.DENSE_TRAJECTORY_CAP


class MapFormatError(ValueError):
    """A grid map file that cannot be parsed; message carries the line."""


@dataclass(frozen=True)
class GridWorld:
    """A deterministic maze with two episode lengths m <= M.

    Cells are (row, col).  Moves into walls or off the grid leave the
    agent in place.
    """

    width: int
    height: int
    walls: frozenset[tuple[int, int]]
    start: tuple[int, int]
    goal: tuple[int, int]
    m: int
    M: int
    actions: tuple[str, ...] = DEFAULT_ACTIONS

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must be at least 1x1")
        object.__setattr__(self, "walls", frozenset(self.walls))
        object.__setattr__(self, "actions", tuple(self.actions))
        for cell in (self.start, self.goal, *self.walls):
            row, col = cell
            if not (0 <= row < self.height and 0 <= col < self.width):
                raise ValueError(f"cell {cell!r} outside the {self.height}x{self.width} grid")
        if self.start in self.walls:
            raise ValueError("start cell is a wall")
        if self.goal in self.walls:
            raise ValueError("goal cell is a wall")
        if not self.actions:
            raise ValueError("action set must be non-empty")
        for action in self.actions:
            if action not in ACTION_MOVES:
                raise ValueError(f"unknown action {action!r}")
        if not (0 <= self.m <= self.M):
            raise ValueError(f"need 0 <= m <= M, got m={self.m}, M={self.M}")


@dataclass(frozen=True)
class CompiledInstance:
    """A grid world as a two-oracle search instance over |A|^M sequences.

    Explicit winning sets (sequence indices, first action most
    significant) are carried only for small sequence spaces.
    """

    sizes: ClassSizes
    m: int
    M: int
    n_actions: int
    winning_tilde: frozenset[int] | None
    winning: frozenset[int] | None

    @property
    def n_sequences(self) -> int:
        return self.sizes.total


@dataclass(frozen=True)
class EndToEndResult:
    """Compiled instance plus mutually cross-checked run outcomes."""

    instance: CompiledInstance
    report: SuccessReport
    p_reduced: float
    p_dense: float | None
    p_analytic: float | None


def step_cell(env: GridWorld, cell: tuple[int, int], action: str) -> tuple[int, int]:
    """Apply one action with bump semantics."""
    try:
        d_row, d_col = ACTION_MOVES[action]
    except KeyError:
        raise ValueError(f"unknown action {action!r}") from None
    row, col = cell[0] + d_row, cell[1] + d_col
    if not (0 <= row < env.height and 0 <= col < env.width):
        return cell
    if (row, col) in env.walls:
        return cell
    return (row, col)


def _action_name(env: GridWorld, action) -> str:
    if isinstance(action, str):
        if action not in env.actions:
            raise ValueError(f"unknown action symbol {action!r}")
        return action
    if isinstance(action, int):
        if not 0 <= action < len(env.actions):
            raise ValueError(f"action index {action!r} outside 0..{len(env.actions) - 1}")
        return env.actions[action]
    raise ValueError(f"unknown action symbol {action!r}")


def is_rewarded(env: GridWorld, sequence) -> bool:
    """Whether the trajectory visits the goal at or before its last step.

    The goal is absorbing: a visit at any earlier step already counts,
    which is what makes longer episodes keep every shorter win.
    """
    names = [_action_name(env, a) for a in sequence]
    if len(names) > env.M:
        raise ValueError(f"sequence length {len(names)} exceeds M = {env.M}")
    cell = env.start
    if cell == env.goal:
        return True
    for action in names:
        cell = step_cell(env, cell, action)
        if cell == env.goal:
            return True
    return False


def _first_goal_step(env: GridWorld, indices: tuple[int, ...]) -> int | None:
    cell = env.start
    if cell == env.goal:
        return 0
    for step, idx in enumerate(indices, start=1):
        cell = step_cell(env, cell, env.actions[idx])
        if cell == env.goal:
            return step
    return None


def compile_instance(
    env: GridWorld, *, enumeration_cap: int = DEFAULT_ENUMERATION_CAP
) -> CompiledInstance:
    """Enumerate the length-M sequence space into the four classes.

    The first winning set collects sequences whose length-m prefix is
    rewarded, the second all rewarded length-M sequences.  Containment
    is asserted, not assumed.
    """
    n_act = len(env.actions)
    n_sequences = n_act**env.M
    if n_sequences > enumeration_cap:
        raise ValueError(
            f"{n_act}^{env.M} = {n_sequences} sequences exceed the cap {enumeration_cap}"
        )
    if n_sequences <= _EXPLICIT_SET_CAP:
        tilde, full = set(), set()
        for index, seq in enumerate(product(range(n_act), repeat=env.M)):
            first = _first_goal_step(env, seq)
            if first is not None:
                full.add(index)
                if first <= env.m:
                    tilde.add(index)
        n_a = len(tilde & full)
        n_minus = len(tilde - full)
        n_plus = len(full - tilde)
        sizes = ClassSizes(
            n_a=n_a,
            n_minus=n_minus,
            n_plus=n_plus,
            n_ell=n_sequences - n_a - n_minus - n_plus,
        )
        winning_tilde: frozenset[int] | None = frozenset(tilde)
        winning: frozenset[int] | None = frozenset(full)
    else:
        counts = _count_classes(env, env.start, 0, {})
        sizes = ClassSizes(*counts)
        winning_tilde = winning = None
    if sizes.n_minus != 0:
        raise CrossCheckError(
            "prefix containment violated: a length-m win lost at length M "
            f"(n_minus = {sizes.n_minus})"
        )
    return CompiledInstance(
        sizes=sizes,
        m=env.m,
        M=env.M,
        n_actions=n_act,
        winning_tilde=winning_tilde,
        winning=winning,
    )


def _count_classes(
    env: GridWorld, cell: tuple[int, int], depth: int, memo: dict
) -> tuple[int, int, int, int]:
    """Class counts over all completions of a goal-free prefix.

    Once the goal is visited every extension shares one classification,
    so those subtrees collapse to a power count; goal-free subtrees
    depend only on (cell, depth) and are memoized.
    """
    n_act = len(env.actions)
    remaining = env.M - depth
    if cell == env.goal:
        leaves = n_act**remaining
        return (leaves, 0, 0, 0) if depth <= env.m else (0, 0, leaves, 0)
    if remaining == 0:
        return (0, 0, 0, 1)
    key = (cell, depth)
    cached = memo.get(key)
    if cached is not None:
        return cached
    totals = [0, 0, 0, 0]
    for action in env.actions:
        sub = _count_classes(env, step_cell(env, cell, action), depth + 1, memo)
        for i in range(4):
            totals[i] += sub[i]
    result = tuple(totals)
    memo[key] = result
    return result  # type: ignore[return-value]


def end_to_end(
    env: GridWorld,
    schedule: PhaseSchedule,
    *,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> EndToEndResult:
    """Compile, simulate, and cross-check one schedule on a grid world.

    The reduced simulator is authoritative; the dense simulator (when
    the explicit sets are available) must agree step by step, and the
    closed-form prediction (when the first phase stays in its rotation
    window) must agree on the final probability.
    """
    instance = compile_instance(env, enumeration_cap=enumeration_cap)
    sizes = instance.sizes
    trajectory = reduced.run_schedule(sizes, schedule)
    p_reduced = trajectory[-1].p_second

    p_dense = None
    if instance.winning_tilde is not None:
        points, _ = dense.run_grover_schedule(
            instance.n_sequences, instance.winning_tilde, instance.winning, schedule
        )
        for r_point, d_point in zip(trajectory, points):
            delta = max(
                abs(r_point.p_first - d_point.p_first),
                abs(r_point.p_second - d_point.p_second),
            )
            if delta > 1e-10:
                raise CrossCheckError(
                    f"reduced/dense disagree at step {r_point.step} by {delta!r}"
                )
        p_dense = points[-1].p_second

    nu_tilde, _ = base_angles(sizes)
    alpha, in_window = alpha_after(schedule.k_first, nu_tilde)
    p_analytic = None
    report = None
    if in_window:
        try:
            angles = boundary_decomposition(alpha, sizes)
        except GeometryError:
            angles = None
        if angles is not None:
            report = final_probability(angles, schedule.j_second)
            p_analytic = report.p_final
            if abs(p_analytic - p_reduced) > 1e-9:
                raise CrossCheckError(
                    f"analytic p {p_analytic!r} disagrees with simulated {p_reduced!r}"
                )
    if report is None:
        report = _report_from_simulation(trajectory, schedule)
    return EndToEndResult(
        instance=instance,
        report=report,
        p_reduced=p_reduced,
        p_dense=p_dense,
        p_analytic=p_analytic,
    )


def _report_from_simulation(trajectory, schedule: PhaseSchedule) -> SuccessReport:
    """Success report measured from the simulated run (no closed forms)."""
    boundary = trajectory[schedule.k_first]
    final = trajectory[-1]
    split = reduced.symmetric_split(final.state)
    sym_weight = abs(split.w_coef) ** 2 + abs(split.l_coef) ** 2
    perp_weight = split.perp_w_norm**2 + split.perp_l_norm**2
    p_sym = abs(split.w_coef) ** 2 / sym_weight if sym_weight > 1e-30 else 0.0
    p_perp = split.perp_w_norm**2 / perp_weight if perp_weight > 1e-30 else 1.0
    boundary_angles = reduced.measure_decomposition(boundary.state)
    perp_ceiling = 1.0 - math.sin(boundary_angles.epsilon) ** 2 * math.cos(
        boundary_angles.chi
    ) ** 2
    return SuccessReport(
        p_first=clamp_probability(boundary.p_second, "boundary probability"),
        p_final=clamp_probability(final.p_second, "final probability"),
        p_sym=clamp_probability(p_sym, "symmetric success"),
        p_perp=clamp_probability(p_perp, "perpendicular success"),
        upper_bound=1.0,
        perp_ceiling=perp_ceiling,
    )


def parse_map(text: str) -> GridWorld:
    """Parse the map file format described in the module docstring."""
    header: dict[str, int] = {}
    grid_rows: list[tuple[int, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            if grid_rows:
                raise MapFormatError(f"line {line_no}: blank line inside the grid")
            continue
        if not grid_rows and "=" in line and line[0] not in ".#SG":
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in ("m", "M"):
                raise MapFormatError(f"line {line_no}: unknown header key {key!r}")
            if key in header:
                raise MapFormatError(f"line {line_no}: duplicate header key {key!r}")
            try:
                header[key] = int(value.strip())
            except ValueError:
                raise MapFormatError(
                    f"line {line_no}: header value {value.strip()!r} is not an integer"
                ) from None
            continue
        grid_rows.append((line_no, line))
    for key in ("m", "M"):
        if key not in header:
            raise MapFormatError(f"missing header key {key!r}")
    if not grid_rows:
        raise MapFormatError("map contains no grid rows")
    width = len(grid_rows[0][1])
    walls: set[tuple[int, int]] = set()
    start = goal = None
    for row, (line_no, line) in enumerate(grid_rows):
        if len(line) != width:
            raise MapFormatError(
                f"line {line_no}: row length {len(line)} differs from {width}"
            )
        for col, char in enumerate(line):
            if char == "#":
                walls.add((row, col))
            elif char == "S":
                if start is not None:
                    raise MapFormatError(f"line {line_no}: second start cell")
                start = (row, col)
            elif char == "G":
                if goal is not None:
                    raise MapFormatError(f"line {line_no}: second goal cell")
                goal = (row, col)
            elif char != ".":
                raise MapFormatError(f"line {line_no}: unknown cell character {char!r}")
    if start is None:
        raise MapFormatError("map has no start cell 'S'")
    if goal is None:
        raise MapFormatError("map has no goal cell 'G'")
    return GridWorld(
        width=width,
        height=len(grid_rows),
        walls=frozenset(walls),
        start=start,
        goal=goal,
        m=header["m"],
        M=header["M"],
    )


def load_map(path) -> GridWorld:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_map(handle.read())
