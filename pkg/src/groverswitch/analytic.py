"""Closed-form angles and probabilities for two-phase Grover runs.

Everything here is plain trigonometry over :class:`~groverswitch.core.ClassSizes`.
The simulators check these formulas and vice versa; neither side is
trusted on its own.

The phase boundary state after ``k`` first-phase Grover iterations has
per-item amplitude ``sin(alpha)/sqrt(n_first)`` on first-winning items
and ``cos(alpha)/sqrt(N - n_first)`` on the rest, with
``alpha = (2k+1) * nu_tilde``.  Projecting that state onto the uniform
superpositions over the *second* oracle's winning and losing sets yields
the angles (phi, epsilon, chi) that fully determine the second phase:
each second-phase Grover iteration rotates the symmetric component by
``2 * nu`` and merely flips the sign of the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    ANGLE_TOL,
    AngleSet,
    ClassSizes,
    CrossCheckError,
    GeometryError,
    SuccessReport,
    clamp_probability,
)

__all__ = [
    "base_angles",
    "alpha_after",
    "p_first_phase",
    "general_boundary_probability",
    "boundary_decomposition",
    "phi_closed_form",
    "epsilon_closed_form",
    "final_probability",
    "grover_reference_probability",
    "shifted_start_bound",
]

_HALF_PI = math.pi / 2.0


def base_angles(sizes: ClassSizes) -> tuple[float, float]:
    """Uniform-state angles (nu_tilde, nu) of the two winning sets.

    sin^2(nu_tilde) = n_first / N and sin^2(nu) = n_second / N; an empty
    winning set gives angle 0.
    """
    total = sizes.total
    nu_tilde = math.asin(math.sqrt(sizes.n_first / total)) if sizes.n_first else 0.0
    nu = math.asin(math.sqrt(sizes.n_second / total)) if sizes.n_second else 0.0
    return nu_tilde, nu


def alpha_after(k_first: int, nu_tilde: float) -> tuple[float, bool]:
    """Boundary angle (2k+1) * nu_tilde and whether it avoids over-rotation.

    The flag is False once the angle exceeds pi/2, where further
    first-phase iterations start reducing the winning amplitude.
    """
    if k_first < 0:
        raise ValueError(f"k_first must be >= 0, got {k_first!r}")
    alpha = (2 * k_first + 1) * nu_tilde
    return alpha, alpha <= _HALF_PI + ANGLE_TOL


def p_first_phase(alpha: float, sizes: ClassSizes) -> float:
    """Second-oracle success at the phase boundary, containment regime.

    p = sin^2(alpha) + cos^2(alpha) * n_plus / (n_plus + n_ell).
    """
    if not sizes.contained:
        raise ValueError(
            "p_first_phase requires containment (n_minus = 0); "
            "use general_boundary_probability for overlapping sets"
        )
    _check_alpha(alpha)
    rest = sizes.n_plus + sizes.n_ell
    floor = sizes.n_plus / rest if rest else 0.0
    s = math.sin(alpha)
    c = math.cos(alpha)
    return clamp_probability(s * s + c * c * floor, "boundary probability")


def general_boundary_probability(alpha: float, sizes: ClassSizes) -> float:
    """Second-oracle success at the phase boundary for any overlap."""
    _check_alpha(alpha)
    s_w_sq, s_l_sq = _per_item_weights(alpha, sizes)
    return clamp_probability(
        sizes.n_a * s_w_sq + sizes.n_plus * s_l_sq, "boundary probability"
    )


def boundary_decomposition(alpha: float, sizes: ClassSizes) -> AngleSet:
    """Angles of the boundary state relative to the second oracle.

    Projects the boundary state (per-item amplitudes as in the module
    docstring) onto the uniform superpositions over the second winning
    and losing sets.  The projections give phi and epsilon; the
    winning/losing split of the remainder gives chi.  Conventions for
    degenerate partitions: an empty class contributes no amplitude, and
    chi defaults to pi/2 when there is no remainder at all.
    """
    _check_alpha(alpha)
    if sizes.n_first == 0 and alpha > ANGLE_TOL:
        raise GeometryError("alpha > 0 is impossible when the first oracle marks nothing")
    if sizes.n_ell == 0:
        raise GeometryError("no always-losing items: losing-side projection undefined")

    s_w_sq, s_l_sq = _per_item_weights(alpha, sizes)
    s_w = math.sqrt(s_w_sq)
    s_l = math.sqrt(s_l_sq)
    c_a = math.sqrt(sizes.n_a) * s_w
    c_m = math.sqrt(sizes.n_minus) * s_w
    c_p = math.sqrt(sizes.n_plus) * s_l
    c_l = math.sqrt(sizes.n_ell) * s_l

    win = sizes.n_second
    lose = sizes.n_minus + sizes.n_ell
    w_proj = (c_a * math.sqrt(sizes.n_a) + c_p * math.sqrt(sizes.n_plus)) / math.sqrt(win) if win else 0.0
    l_proj = (c_m * math.sqrt(sizes.n_minus) + c_l * math.sqrt(sizes.n_ell)) / math.sqrt(lose)
    # Cross-difference forms avoid cancellation and are exactly 0 for
    # proportional components (e.g. the losing remainder under containment).
    w_rem = (
        abs(c_a * math.sqrt(sizes.n_plus) - c_p * math.sqrt(sizes.n_a)) / math.sqrt(win)
        if win
        else 0.0
    )
    l_rem = abs(c_m * math.sqrt(sizes.n_ell) - c_l * math.sqrt(sizes.n_minus)) / math.sqrt(lose)

    phi = math.atan2(w_proj, l_proj)
    sin_eps = math.hypot(w_rem, l_rem)
    epsilon = math.atan2(sin_eps, math.hypot(w_proj, l_proj))
    chi = _HALF_PI if sin_eps <= 1e-15 else math.atan2(w_rem, l_rem)
    beta = math.asin(math.sqrt(sizes.n_plus / (sizes.n_plus + sizes.n_ell)))
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


def phi_closed_form(alpha: float, sizes: ClassSizes) -> float:
    """Containment closed form for phi, used as a cross-check.

    tan(phi) = tan(alpha) * sqrt(n_first*(n_plus+n_ell) / ((n_first+n_plus)*n_ell))
             + sqrt(n_plus^2 / ((n_first+n_plus)*n_ell))
    """
    _require_containment(sizes)
    nf, np_, nl = sizes.n_first, sizes.n_plus, sizes.n_ell
    denom = (nf + np_) * nl
    tan_phi = math.tan(alpha) * math.sqrt(nf * (np_ + nl) / denom) + math.sqrt(
        np_ * np_ / denom
    )
    return math.atan(tan_phi)


def epsilon_closed_form(alpha: float, sizes: ClassSizes) -> float:
    """Containment closed form for epsilon, used as a cross-check.

    sin(epsilon) = sqrt(n_plus/(n_plus+n_first))
                 * (sin(alpha) - sqrt(n_first/(n_plus+n_ell)) * cos(alpha))
    """
    _require_containment(sizes)
    nf, np_, nl = sizes.n_first, sizes.n_plus, sizes.n_ell
    bracket = math.sin(alpha) - math.sqrt(nf / (np_ + nl)) * math.cos(alpha)
    return math.asin(math.sqrt(np_ / (np_ + nf)) * abs(bracket))


def final_probability(angles: AngleSet, j_second: int) -> SuccessReport:
    """Success after j_second second-phase Grover iterations.

    The symmetric component rotates to phi + delta with delta = 2j*nu
    while the remainder keeps its winning fraction sin^2(chi), so

        p_final = cos^2(eps) * sin^2(phi + delta) + sin^2(eps) * sin^2(chi).
    """
    if j_second < 0:
        raise ValueError(f"j_second must be >= 0, got {j_second!r}")
    delta = 2.0 * j_second * angles.nu
    p_sym = math.sin(angles.phi + delta) ** 2
    p_perp = math.sin(angles.chi) ** 2
    cos_eps_sq = math.cos(angles.epsilon) ** 2
    sin_eps_sq = math.sin(angles.epsilon) ** 2
    p_final = clamp_probability(cos_eps_sq * p_sym + sin_eps_sq * p_perp, "p_final")
    p_first = clamp_probability(
        cos_eps_sq * math.sin(angles.phi) ** 2 + sin_eps_sq * p_perp, "p_first"
    )
    cos_phi_sq = math.cos(angles.phi) ** 2
    if cos_phi_sq <= 1e-300:
        upper_bound = 1.0
    else:
        upper_bound = 1.0 - (1.0 - p_first) * math.cos(angles.phi + delta) ** 2 / cos_phi_sq
    perp_ceiling = 1.0 - sin_eps_sq * math.cos(angles.chi) ** 2
    if abs(angles.chi - _HALF_PI) <= 1e-12 and p_final > upper_bound + 1e-9:
        raise CrossCheckError(
            f"containment saturation violated: p_final {p_final!r} "
            f"exceeds its ceiling {upper_bound!r}"
        )
    return SuccessReport(
        p_first=p_first,
        p_final=p_final,
        p_sym=p_sym,
        p_perp=p_perp,
        upper_bound=upper_bound,
        perp_ceiling=perp_ceiling,
    )


def grover_reference_probability(k: int, nu: float) -> tuple[float, bool]:
    """Single-oracle Grover success sin^2((2k+1)*nu) and its window flag.

    The flag is False when (2k+1)*nu exceeds pi/2 (over-rotation); the
    returned value is still the exact rotation identity.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k!r}")
    angle = (2 * k + 1) * nu
    return math.sin(angle) ** 2, angle <= _HALF_PI + ANGLE_TOL


def shifted_start_bound(phi0: float, j: int, nu: float) -> float:
    """Success ceiling sin^2(phi0 + 2j*nu) from a prepared starting angle.

    Capped at 1; meaningful as an optimality bound while the argument
    stays within [0, pi/2].
    """
    if not (-ANGLE_TOL <= phi0 <= _HALF_PI + ANGLE_TOL):
        raise ValueError(f"phi0 = {phi0!r} outside [0, pi/2]")
    if j < 0:
        raise ValueError(f"j must be >= 0, got {j!r}")
    return min(1.0, math.sin(phi0 + 2.0 * j * nu) ** 2)


def _check_alpha(alpha: float) -> None:
    if not (-ANGLE_TOL <= alpha <= _HALF_PI + ANGLE_TOL):
        raise ValueError(f"alpha = {alpha!r} outside [0, pi/2]")


def _require_containment(sizes: ClassSizes) -> None:
    if not sizes.contained:
        raise ValueError("closed form only holds under containment (n_minus = 0)")
    if sizes.n_ell == 0:
        raise GeometryError("no always-losing items: closed form undefined")


def _per_item_weights(alpha: float, sizes: ClassSizes) -> tuple[float, float]:
    """Squared per-item amplitudes (first-winning items, the rest)."""
    nf = sizes.n_first
    rest = sizes.total - nf
    sin_sq = math.sin(alpha) ** 2
    cos_sq = math.cos(alpha) ** 2
    if nf == 0:
        s_w_sq = 0.0
    else:
        s_w_sq = sin_sq / nf
    if rest == 0:
        if cos_sq > ANGLE_TOL:
            raise GeometryError(
                "first oracle marks every item but alpha is below pi/2"
            )
        s_l_sq = 0.0
    else:
        s_l_sq = cos_sq / rest
    return s_w_sq, s_l_sq
