import math
from fractions import Fraction

import numpy as np
import pytest

from qmontyhall.analysis import (
    CASES,
    NoSignChangeError,
    case_config,
    case_mixing_coefficient,
    classical_reference,
    closed_form_payoff,
    default_gamma_grid,
    default_noise_grid,
    gamma_coefficients,
    optimal_gamma,
    simulate_case,
    sweep,
    threshold,
    verify_case,
)
from qmontyhall.game import play

LN2 = math.log(2.0)


class TestClosedForm:
    @pytest.mark.parametrize(
        "case,noise,gamma,expected",
        [
            (1, 0.0, 0.0, 2.0 / 3.0),
            (4, LN2, 0.0, 7.0 / 12.0),
            (5, 1.0, 0.3, 1.0 / 3.0),
            (5, 1.0, 1.4, 1.0 / 3.0),
            (7, 1.0 - math.sqrt(2.0 / 3.0), 0.0, (9.0 + 2.0 * math.sqrt(6.0)) / 27.0),
        ],
    )
    def test_reference_points(self, case, noise, gamma, expected):
        assert closed_form_payoff(case, noise, gamma) == pytest.approx(
            expected, abs=1e-12
        )

    def test_case_domain(self):
        with pytest.raises(ValueError, match="out of range"):
            closed_form_payoff(0, 0.0, 0.0)
        with pytest.raises(ValueError, match="out of range"):
            closed_form_payoff(8, 0.0, 0.0)

    def test_noise_domain(self):
        with pytest.raises(ValueError, match="time"):
            closed_form_payoff(1, -0.5, 0.0)
        with pytest.raises(ValueError, match="probability"):
            closed_form_payoff(6, 1.5, 0.0)

    def test_gamma_domain(self):
        with pytest.raises(ValueError, match="gamma"):
            closed_form_payoff(1, 0.0, 2.0)


class TestSimulateCase:
    def test_correlated_stay(self):
        assert simulate_case(3, 0.0, math.pi / 2) == pytest.approx(1.0, abs=1e-12)

    def test_shuffled_choice_baseline(self):
        assert simulate_case(2, 0.0, 0.0) == pytest.approx(2.0 / 3.0, abs=1e-12)

    @pytest.mark.parametrize("case", sorted(CASES))
    def test_matches_closed_form_on_coarse_grid(self, case):
        noise_values = default_noise_grid(case)[::5]
        for x in noise_values:
            for g in np.linspace(0.0, math.pi / 2, 5):
                assert simulate_case(case, x, g) == pytest.approx(
                    closed_form_payoff(case, x, g), abs=1e-9
                )


class TestClassicalReference:
    def test_exact_values(self):
        assert classical_reference(True) == Fraction(2, 3)
        assert classical_reference(False) == Fraction(1, 3)
        assert classical_reference(True) + classical_reference(False) == 1

    def test_matches_noiseless_simulation(self):
        assert simulate_case(1, 0.0, 0.0) == pytest.approx(
            float(classical_reference(True)), abs=1e-12
        )
        assert simulate_case(1, 0.0, math.pi / 2) == pytest.approx(
            float(classical_reference(False)), abs=1e-12
        )


class TestGammaCoefficients:
    def test_uncorrelated_noiseless(self):
        c0, c1 = gamma_coefficients(lambda g: simulate_case(5, 0.0, g))
        assert c0 == pytest.approx(0.5, abs=1e-12)
        assert c1 == pytest.approx(1.0 / 6.0, abs=1e-12)

    def test_counter_strategy_asymptote(self):
        c0, c1 = gamma_coefficients(lambda g: simulate_case(4, 40.0, g))
        assert c0 == pytest.approx(0.5, abs=1e-9)
        assert c1 == pytest.approx(0.0, abs=1e-9)

    def test_fully_depolarized(self):
        c0, c1 = gamma_coefficients(lambda g: simulate_case(6, 1.0, g))
        assert c0 == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert c1 == pytest.approx(0.0, abs=1e-12)

    def test_rejects_other_families(self):
        with pytest.raises(ValueError, match="not of the form"):
            gamma_coefficients(math.sin)

    @pytest.mark.parametrize("case", sorted(CASES))
    def test_payoff_lies_in_cosine_family(self, case, rng):
        noise = float(rng.uniform(0.0, 3.0 if CASES[case].channel_kind == "se" else 1.0))
        c0, c1 = gamma_coefficients(lambda g: simulate_case(case, noise, g))
        for g in rng.uniform(0.0, math.pi / 2, size=10):
            predicted = c0 + c1 * math.cos(2.0 * g)
            assert simulate_case(case, noise, float(g)) == pytest.approx(
                predicted, abs=1e-10
            )


class TestOptimalGamma:
    def test_low_noise_favours_switching(self):
        c1 = case_mixing_coefficient(1, 0.2)
        assert optimal_gamma(c1) == (0.0, "switch")

    def test_high_noise_flips_to_staying(self):
        c1 = case_mixing_coefficient(1, 1.0)
        gamma_star, label = optimal_gamma(c1)
        assert (gamma_star, label) == (math.pi / 2, "not_switch")

    def test_noisy_correlated_state_switches(self):
        assert optimal_gamma(case_mixing_coefficient(6, 0.9))[1] == "switch"

    def test_indifferent(self):
        assert optimal_gamma(0.0) == (0.0, "indifferent")
        assert optimal_gamma(5e-13) == (0.0, "indifferent")


class TestThreshold:
    def test_emission_crossover(self):
        assert threshold(1, 0.1, 2.0) == pytest.approx(LN2, abs=1e-8)

    def test_depolarizing_crossover(self):
        assert threshold(6, 0.1, 0.99) == pytest.approx(
            (3.0 - math.sqrt(3.0)) / 2.0, abs=1e-8
        )

    def test_no_crossover(self):
        with pytest.raises(NoSignChangeError, match="no sign change"):
            threshold(5, 0.1, 0.9)


class TestSweep:
    def test_small_grid(self):
        table = sweep(1, [0.0, LN2, 2.0], [0.0, math.pi / 4, math.pi / 2])
        assert len(table.rows) == 9
        noise, gamma, payoff = table.rows[0]
        assert (noise, gamma) == (0.0, 0.0)
        assert payoff == pytest.approx(2.0 / 3.0, abs=1e-12)
        # noise-major order
        assert [r[0] for r in table.rows] == [0.0] * 3 + [LN2] * 3 + [2.0] * 3

    def test_depolarizing_extremes(self):
        table = sweep(6, np.linspace(0.0, 1.0, 11), np.linspace(0.0, math.pi / 2, 11))
        payoffs = np.array([r[2] for r in table.rows])
        assert payoffs.max() == pytest.approx(1.0, abs=1e-9)
        best = table.rows[int(payoffs.argmax())]
        assert (best[0], best[1]) == (0.0, math.pi / 2)
        final = [r[2] for r in table.rows if r[0] == 1.0]
        np.testing.assert_allclose(final, 1.0 / 3.0, atol=1e-9)

    def test_counter_strategy_floor(self):
        table = sweep(7, [1.0], np.linspace(0.0, math.pi / 2, 7))
        np.testing.assert_allclose([r[2] for r in table.rows], 1.0 / 3.0, atol=1e-9)

    def test_single_point(self):
        table = sweep(3, [0.5], [0.25])
        assert len(table.rows) == 1

    def test_grid_validation(self):
        with pytest.raises(ValueError, match="ascending"):
            sweep(1, [1.0, 0.5], [0.0])
        with pytest.raises(ValueError, match="empty"):
            sweep(1, [], [0.0])

    def test_callable_target(self):
        table = sweep(lambda x, g: 0.5, [0.0, 1.0], [0.0])
        assert all(r[2] == 0.5 for r in table.rows)


class TestVerifyCase:
    @pytest.mark.parametrize("case", [1, 6])
    def test_passes_on_default_grid(self, case):
        report = verify_case(case)
        assert report.passed
        assert report.max_abs_error <= 1e-9
        assert report.points == 441

    def test_negative_control(self):
        # Case 3 with the wrong Bob move must not reproduce its closed form
        wrong = lambda case, x, g: play(case_config(case, x, g, bob="m1")).payoff
        report = verify_case(3, simulate=wrong)
        assert not report.passed
        assert report.max_abs_error > 0.01


class TestDegeneracies:
    def test_shuffles_are_equivalent_under_emission(self):
        for x in np.linspace(0.0, 3.0, 7):
            for g in np.linspace(0.0, math.pi / 2, 5):
                values = [
                    play(case_config(2, x, g, bob=bob)).payoff for bob in ("m1", "m2")
                ]
                assert values[0] == pytest.approx(values[1], abs=1e-12)

    def test_choice_shuffles_are_invisible_to_depolarizing(self):
        for x in np.linspace(0.0, 1.0, 5):
            for g in np.linspace(0.0, math.pi / 2, 5):
                values = [
                    play(case_config(5, x, g, bob=bob)).payoff
                    for bob in ("id", "m1", "m2")
                ]
                assert max(values) - min(values) <= 1e-12


class TestAsymptotics:
    def test_emission_cases_converge_to_same_limit(self):
        for g in np.linspace(0.0, math.pi / 2, 11):
            expected = math.sin(g) ** 2
            assert simulate_case(1, 40.0, g) == pytest.approx(expected, abs=1e-9)
            assert simulate_case(3, 40.0, g) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("case", [5, 6, 7])
    def test_full_depolarizing_flattens_payoff(self, case):
        for g in np.linspace(0.0, math.pi / 2, 5):
            assert simulate_case(case, 1.0, g) == pytest.approx(1.0 / 3.0, abs=1e-9)


class TestDefaultGrids:
    def test_noise_grids(self):
        assert default_noise_grid(1)[-1] == 3.0
        assert default_noise_grid(7)[-1] == 1.0
        assert len(default_noise_grid(1)) == 21

    def test_gamma_grid(self):
        grid = default_gamma_grid()
        assert len(grid) == 21
        assert grid[0] == 0.0
        assert grid[-1] == pytest.approx(math.pi / 2)
