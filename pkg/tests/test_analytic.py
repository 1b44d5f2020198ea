"""Closed forms cross-checked against the two simulators."""

import math

import numpy as np
import pytest

from groverswitch import analytic, dense, reduced
from groverswitch.core import (
    ClassSizes,
    CrossCheckError,
    GeometryError,
    PhaseSchedule,
    synthetic_sets,
)

FIG2 = ClassSizes(5, 10, 5, 5000)
HALF_PI = math.pi / 2.0


def containment_instances(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        sizes = ClassSizes(
            int(rng.integers(1, 8)), 0, int(rng.integers(0, 8)), int(rng.integers(1, 3000))
        )
        nu_tilde, nu = analytic.base_angles(sizes)
        k_window = int((HALF_PI / nu_tilde - 1) // 2) if nu_tilde else 0
        k = int(rng.integers(0, k_window + 1))
        alpha, in_window = analytic.alpha_after(k, nu_tilde)
        if not in_window:
            continue
        angles = analytic.boundary_decomposition(alpha, sizes)
        j_window = int((HALF_PI - angles.phi) // (2 * nu)) if nu else 0
        j = int(rng.integers(0, max(j_window, 0) + 1))
        if angles.phi + 2 * j * nu > HALF_PI:
            continue
        out.append((sizes, k, j, alpha, angles))
    return out


class TestBaseAngles:
    def test_quarter_space(self):
        nu_tilde, _ = analytic.base_angles(ClassSizes(1, 0, 1, 2))
        assert nu_tilde == pytest.approx(math.pi / 6, abs=1e-15)

    def test_full_winning_space(self):
        nu_tilde, _ = analytic.base_angles(ClassSizes(2, 2, 0, 0))
        assert nu_tilde == pytest.approx(HALF_PI, abs=1e-15)

    def test_headline_sizes(self):
        nu_tilde, nu = analytic.base_angles(FIG2)
        assert nu_tilde == pytest.approx(0.054690298079169, abs=1e-12)
        assert nu == pytest.approx(0.044647015688961, abs=1e-12)
        assert math.sin(nu_tilde) ** 2 * FIG2.total == pytest.approx(15, abs=1e-10)
        assert math.sin(nu) ** 2 * FIG2.total == pytest.approx(10, abs=1e-10)

    def test_empty_sets_give_zero(self):
        assert analytic.base_angles(ClassSizes(0, 0, 0, 7)) == (0.0, 0.0)


class TestAlphaAfter:
    def test_zero_queries(self):
        assert analytic.alpha_after(0, 0.3) == (0.3, True)

    def test_single_query_quarter_space(self):
        alpha, valid = analytic.alpha_after(1, math.pi / 6)
        assert alpha == pytest.approx(HALF_PI, abs=1e-15)
        assert valid

    def test_headline_ten_queries(self):
        nu_tilde, _ = analytic.base_angles(FIG2)
        alpha, valid = analytic.alpha_after(10, nu_tilde)
        assert alpha == pytest.approx(1.1484963, abs=1e-6)
        assert valid

    def test_over_rotation_flagged(self):
        _, valid = analytic.alpha_after(2, math.pi / 6)
        assert not valid


class TestFirstPhaseProbability:
    def test_full_rotation(self):
        assert analytic.p_first_phase(HALF_PI, ClassSizes(1, 0, 1, 3)) == pytest.approx(
            1.0, abs=1e-15
        )

    def test_zero_rotation_uniform_over_rest(self):
        assert analytic.p_first_phase(0.0, ClassSizes(1, 0, 1, 3)) == pytest.approx(
            0.25, abs=1e-15
        )

    def test_against_dense_simulator(self):
        # N=8, first set {0}, second {0, 1}, one first-phase query.
        sizes = ClassSizes(1, 0, 1, 6)
        tilde, full = synthetic_sets(sizes)
        points, _ = dense.run_grover_schedule(8, tilde, full, PhaseSchedule(1, 0))
        alpha, _ = analytic.alpha_after(1, analytic.base_angles(sizes)[0])
        assert analytic.p_first_phase(alpha, sizes) == pytest.approx(
            points[-1].p_second, abs=1e-12
        )

    def test_rejects_overlap(self):
        with pytest.raises(ValueError, match="containment"):
            analytic.p_first_phase(0.3, FIG2)

    def test_general_form_against_dense(self):
        tilde, full = synthetic_sets(ClassSizes(1, 2, 1, 12))
        sizes = ClassSizes(1, 2, 1, 12)
        for k in (0, 1, 2):
            alpha, valid = analytic.alpha_after(k, analytic.base_angles(sizes)[0])
            if not valid:
                break
            points, _ = dense.run_grover_schedule(16, tilde, full, PhaseSchedule(k, 0))
            assert analytic.general_boundary_probability(alpha, sizes) == pytest.approx(
                points[-1].p_second, abs=1e-12
            )


class TestBoundaryDecomposition:
    def test_beta_direct_substitution(self):
        angles = analytic.boundary_decomposition(0.2, ClassSizes(2, 0, 1, 3))
        assert math.sin(angles.beta) ** 2 == pytest.approx(0.25, abs=1e-15)
        assert angles.beta == math.asin(math.sqrt(1 / 4))

    def test_uniform_state_has_no_perpendicular_part(self):
        sizes = ClassSizes(2, 0, 3, 11)
        nu_tilde, _ = analytic.base_angles(sizes)
        angles = analytic.boundary_decomposition(nu_tilde, sizes)
        assert angles.epsilon == pytest.approx(0.0, abs=1e-12)

    def test_headline_against_reduced_projections(self):
        nu_tilde, _ = analytic.base_angles(FIG2)
        alpha, _ = analytic.alpha_after(5, nu_tilde)
        angles = analytic.boundary_decomposition(alpha, FIG2)
        boundary = reduced.run_schedule(FIG2, PhaseSchedule(5, 0))[-1].state
        measured = reduced.measure_decomposition(boundary)
        assert angles.phi == pytest.approx(measured.phi, abs=1e-10)
        assert angles.epsilon == pytest.approx(measured.epsilon, abs=1e-10)
        assert angles.chi == pytest.approx(measured.chi, abs=1e-10)

    def test_containment_closed_forms(self):
        for sizes, k, _, alpha, angles in containment_instances(60, seed=11):
            assert angles.phi == pytest.approx(
                analytic.phi_closed_form(alpha, sizes), abs=1e-10
            )
            assert angles.epsilon == pytest.approx(
                analytic.epsilon_closed_form(alpha, sizes), abs=1e-10
            )
            assert angles.chi == pytest.approx(HALF_PI, abs=1e-12)

    def test_degenerate_geometries_raise(self):
        with pytest.raises(GeometryError):
            analytic.boundary_decomposition(0.3, ClassSizes(0, 0, 2, 6))
        with pytest.raises(GeometryError):
            analytic.boundary_decomposition(0.3, ClassSizes(1, 1, 2, 0))

    def test_alpha_range_checked(self):
        with pytest.raises(ValueError):
            analytic.boundary_decomposition(2.0, ClassSizes(1, 0, 1, 6))


class TestFinalProbability:
    def test_zero_second_phase_is_boundary_probability(self):
        for sizes, k in ((ClassSizes(2, 0, 1, 13), 1), (FIG2, 2)):
            nu_tilde, _ = analytic.base_angles(sizes)
            alpha, in_window = analytic.alpha_after(k, nu_tilde)
            assert in_window
            angles = analytic.boundary_decomposition(alpha, sizes)
            report = analytic.final_probability(angles, 0)
            assert report.p_final == pytest.approx(report.p_first, abs=1e-15)

    def test_containment_saturates_its_ceiling(self):
        for sizes, k, j, alpha, angles in containment_instances(60, seed=23):
            report = analytic.final_probability(angles, j)
            simulated = reduced.run_schedule(sizes, PhaseSchedule(k, j))[-1].p_second
            expected = (
                math.cos(angles.epsilon) ** 2 * math.sin(angles.phi + 2 * j * angles.nu) ** 2
                + math.sin(angles.epsilon) ** 2
            )
            assert report.p_final == pytest.approx(expected, abs=1e-12)
            assert report.p_final == pytest.approx(simulated, abs=1e-9)
            assert report.p_final == pytest.approx(report.upper_bound, abs=1e-9)

    def test_headline_plateau_stays_below_ceiling(self):
        nu_tilde, _ = analytic.base_angles(FIG2)
        alpha, _ = analytic.alpha_after(10, nu_tilde)
        angles = analytic.boundary_decomposition(alpha, FIG2)
        ceiling = 1 - math.sin(angles.epsilon) ** 2 * math.cos(angles.chi) ** 2
        assert ceiling < 1.0
        trajectory = reduced.run_schedule(FIG2, PhaseSchedule(10, 120))
        plateau = max(point.p_second for point in trajectory[10:])
        assert plateau <= ceiling + 1e-12
        assert analytic.final_probability(angles, 45).perp_ceiling == pytest.approx(
            ceiling, abs=1e-15
        )

    def test_upper_bound_monotone_on_grid(self):
        # Eq-style ceiling is non-decreasing in boundary success, phi, delta.
        phis = np.linspace(0.05, 1.2, 12)
        deltas = np.linspace(0.0, 0.3, 7)
        ps = np.linspace(0.0, 0.9, 7)

        def bound(p, phi, delta):
            return 1 - (1 - p) * math.cos(phi + delta) ** 2 / math.cos(phi) ** 2

        for phi in phis:
            for delta in deltas:
                if phi + delta > HALF_PI:
                    continue
                for p_lo, p_hi in zip(ps, ps[1:]):
                    assert bound(p_hi, phi, delta) >= bound(p_lo, phi, delta) - 1e-12
        for p in ps:
            for delta in deltas:
                for phi_lo, phi_hi in zip(phis, phis[1:]):
                    if phi_hi + delta > HALF_PI:
                        continue
                    assert bound(p, phi_hi, delta) >= bound(p, phi_lo, delta) - 1e-12
        for p in ps:
            for phi in phis:
                for d_lo, d_hi in zip(deltas, deltas[1:]):
                    if phi + d_hi > HALF_PI:
                        continue
                    assert bound(p, phi, d_hi) >= bound(p, phi, d_lo) - 1e-12


class TestGroverReference:
    def test_zero_queries_is_random_guess(self):
        nu = math.asin(math.sqrt(3 / 10))
        p, valid = analytic.grover_reference_probability(0, nu)
        assert p == pytest.approx(0.3, abs=1e-15)
        assert valid

    def test_textbook_single_query(self):
        p, valid = analytic.grover_reference_probability(1, math.pi / 6)
        assert p == pytest.approx(1.0, abs=1e-15)
        assert valid

    def test_against_dense_simulation(self):
        # N=64, one winning item, three queries; value frozen from the
        # dense run (the rotation identity, not yet over-rotated).
        nu = math.asin(math.sqrt(1 / 64))
        p, valid = analytic.grover_reference_probability(3, nu)
        points, _ = dense.run_grover_schedule(64, {0}, {0}, PhaseSchedule(3, 0))
        assert p == pytest.approx(points[-1].p_second, abs=1e-12)
        assert p == pytest.approx(0.5913801500573754, abs=1e-12)
        assert valid


class TestShiftedStartBound:
    def test_zero_queries(self):
        assert analytic.shifted_start_bound(0.7, 0, 0.2) == pytest.approx(
            math.sin(0.7) ** 2, abs=1e-15
        )

    def test_matches_reference_probability_convention(self):
        # Starting at the uniform angle reproduces the plain Grover value.
        nu = math.asin(math.sqrt(2 / 50))
        for k in range(4):
            reference, _ = analytic.grover_reference_probability(k, nu)
            assert analytic.shifted_start_bound(nu, k, nu) == pytest.approx(
                reference, abs=1e-15
            )

    def test_against_dense_prepared_state(self):
        # N=4, winning {0}, prepared at angle pi/4, one Grover query.
        phi0 = math.pi / 4
        amps = np.full(4, math.cos(phi0) / math.sqrt(3), dtype=complex)
        amps[0] = math.sin(phi0)
        state = dense.FullState(amplitudes=amps, winning_tilde=frozenset(), winning={0})
        state = dense.apply_phase_oracle(state, "second")
        state = dense.apply_reflection(state, np.full(4, 0.5, dtype=complex))
        measured = dense.success_probability(state, "second")
        predicted = analytic.shifted_start_bound(phi0, 1, math.pi / 6)
        assert measured == pytest.approx(predicted, abs=1e-12)
        assert predicted == pytest.approx(math.sin(phi0 + math.pi / 3) ** 2, abs=1e-15)
