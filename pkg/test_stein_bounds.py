#!/usr/bin/env python3
"""
Tests for the single-pair and composite Stein bounds and the per-n sweep
"""

import math
import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from quantum_stein.divergence import kappa
from quantum_stein.errors import InvalidParameterError, SupportViolationError
from quantum_stein.hermitian import State, maximally_mixed, random_state
from quantum_stein.stein_bounds import (
    HypothesisInstance,
    amv_lower,
    amv_upper,
    bound_report,
    bound_sweep,
    d1_inf,
    kappa_max,
    optimized_upper,
    schedule_params,
    second_order_bracket,
    stein_lower,
    stein_upper,
)
from quantum_stein.verification import theorem_fixture

LOG3 = math.log(3)


@pytest.fixture
def self_instance(half):
    return HypothesisInstance([half], half, 0.1)


@pytest.fixture
def fixture_instance():
    return HypothesisInstance([State.diagonal([0.9, 0.1])], maximally_mixed(2), 0.05)


class TestInstance:

    def test_support_violation_rejected(self, half, pure_zero):
        with pytest.raises(SupportViolationError):
            HypothesisInstance([half], pure_zero, 0.1)

    def test_parameter_validation(self, half):
        with pytest.raises(InvalidParameterError):
            HypothesisInstance([], half, 0.1)
        with pytest.raises(InvalidParameterError):
            HypothesisInstance([half], half, 0.0)
        with pytest.raises(InvalidParameterError):
            HypothesisInstance([maximally_mixed(3)], half, 0.1)

    def test_d1_examples(self, self_instance, pure_zero, half):
        assert d1_inf(self_instance) == pytest.approx(0.0, abs=1e-12)
        assert d1_inf(HypothesisInstance([pure_zero], half, 0.1)) == pytest.approx(math.log(2))
        pair = HypothesisInstance([pure_zero, State.diagonal([0.9, 0.1])], half, 0.1)
        assert pair.d1 == pytest.approx(math.log(2) - (-(0.9 * math.log(0.9) + 0.1 * math.log(0.1))))

    def test_kappa_max(self, self_instance, pure_zero, half):
        assert kappa_max(self_instance) == pytest.approx(LOG3)
        instance = HypothesisInstance([pure_zero, random_state(2, 4)], half, 0.1)
        assert 1.0 < instance.kappa_max <= math.log(2 + 2 * math.sqrt(2)) + 1e-9


class TestSinglePairBounds:

    def test_amv_upper_examples(self, pure_zero, half):
        assert amv_upper(pure_zero, half, 0.1, 0.5) == pytest.approx(math.log(10) - 3 * math.log(2))
        assert amv_upper(half, half, 0.5, 0.5) == pytest.approx(-math.log(2))

    def test_amv_upper_diverges_near_one(self, pure_zero, half):
        assert amv_upper(pure_zero, half, 0.1, 0.999) > amv_upper(pure_zero, half, 0.1, 0.9)
        with pytest.raises(InvalidParameterError):
            amv_upper(pure_zero, half, 0.1, 1.0)

    def test_amv_lower_examples(self, pure_zero, half):
        epsilon = 1 - 1 / math.e
        assert amv_lower(half, half, epsilon, 1) == pytest.approx(-4 * math.sqrt(2) * LOG3)
        assert amv_lower(half, half, epsilon, 1) == pytest.approx(-6.2147, abs=1e-4)
        expected = -math.log(2) - 0.5 * 4 * math.sqrt(2) * kappa(pure_zero, half) * math.log(10 / 9)
        assert amv_lower(pure_zero, half, 0.1, 4) == pytest.approx(expected)

    def test_amv_lower_support_violation(self, pure_zero, half):
        with pytest.raises(SupportViolationError):
            amv_lower(half, pure_zero, 0.1, 1)


class TestSchedule:

    def test_cosh_at_hundred(self):
        params = schedule_params(100, 1, 0.1, LOG3, 2, 0.0)
        assert math.cosh(params.c) == pytest.approx(2 + math.log(20) / 100)
        assert math.cosh(params.c) == pytest.approx(2.02996, abs=1e-5)
        assert params.alpha == pytest.approx(1 - params.a_star / 10)

    def test_forced_cosh_three(self):
        epsilon = 2 * math.exp(-5)
        params = schedule_params(5, 1, epsilon, LOG3, 2, 0.0)
        assert math.cosh(params.c) == pytest.approx(3.0)

    @pytest.mark.parametrize("n", [1, 2, 10, 1000])
    def test_c_above_one(self, n):
        assert schedule_params(n, 3, 0.05, 1.2, 2, 0.3).c > 1.0

    def test_invalid(self):
        with pytest.raises(InvalidParameterError):
            schedule_params(0, 1, 0.1, LOG3, 2, 0.0)


class TestCompositeBounds:

    def test_stein_upper_example(self, self_instance):
        expected = (2 * math.sqrt(math.log(20) / 100) * math.sqrt(8 * LOG3 ** 2 + math.log(2))
                    + 4 * LOG3 * math.log(20) / 100)
        assert stein_upper(self_instance, 100) == pytest.approx(expected)
        assert stein_upper(self_instance, 100) == pytest.approx(1.2452, abs=1e-4)

    def test_stein_lower_example(self, half):
        instance = HypothesisInstance([half], half, 1 - 1 / math.e)
        assert stein_lower(instance, 1) == pytest.approx(-4 * math.sqrt(2) * LOG3)

    def test_lower_below_single_pair_bound(self, fixture_instance):
        rho = fixture_instance.null_pool[0]
        for n in (1, 5, 50):
            assert stein_lower(fixture_instance, n) <= amv_lower(rho, fixture_instance.sigma, 0.05, n) + 1e-12

    def test_optimized_never_above_formula(self, fixture_instance):
        for n in (1, 3, 30, 300):
            assert optimized_upper(fixture_instance, n) <= stein_upper(fixture_instance, n) + 1e-12

    def test_bounds_approach_d1(self, fixture_instance):
        d1 = fixture_instance.d1
        assert abs(stein_upper(fixture_instance, 10 ** 8) + d1) < 0.01
        assert abs(stein_lower(fixture_instance, 10 ** 8) + d1) < 0.01

    def test_delta_out_of_range(self, fixture_instance):
        with pytest.raises(InvalidParameterError):
            stein_upper(fixture_instance, 2, delta_n=0.1)
        with pytest.raises(InvalidParameterError):
            stein_upper(fixture_instance, 2, delta_n=-0.001)

    def test_infinite_family_uses_net(self, half):
        pool = [random_state(2, seed) for seed in range(10)]
        instance = HypothesisInstance(pool, half, 0.2, is_finite_family=False)
        report = bound_report(instance, 2)
        assert report.delta == pytest.approx(0.2 / 8)
        assert 1 <= report.net_size <= len(pool)


class TestBoundReport:

    def test_single_report(self, fixture_instance):
        report = bound_report(fixture_instance, 1)
        assert report.lower <= report.upper
        assert report.upper_clamped == min(0.0, report.upper)
        assert report.exact is None
        assert report.net_size == 1

    def test_feasible_schedule_at_large_n(self, fixture_instance):
        assert bound_report(fixture_instance, 100).schedule_feasible

    def test_memory_cap_skips_exact(self, fixture_instance):
        report = bound_report(fixture_instance, 4, with_exact=True, cap=8)
        assert report.exact is None
        assert report.warning.startswith("memory cap")

    def test_oracle_limit_skips_exact(self, half):
        pool = [random_state(2, seed) for seed in range(9)]
        report = bound_report(HypothesisInstance(pool, half, 0.1), 1, with_exact=True)
        assert report.exact is None
        assert "oracle limit" in report.warning

    def test_second_order_bracket(self, fixture_instance):
        report = bound_report(fixture_instance, 2, with_exact=True)
        bracket = second_order_bracket(fixture_instance, 2, report.exact)
        assert bracket.contains
        assert bracket.lower <= bracket.upper


class TestBoundSweep:

    def test_exact_inside_bracket(self, fixture_instance):
        reports = bound_sweep(fixture_instance, [1, 2, 3, 4], with_exact=True)
        assert [report.n for report in reports] == [1, 2, 3, 4]
        for report in reports:
            assert report.exact_certified
            assert report.brackets_exact()
        assert reports[0].exact == pytest.approx(math.log(0.75), abs=1e-7)

    def test_two_state_fixture_bracketed_through_eight_copies(self):
        instance = theorem_fixture()
        reports = bound_sweep(instance, list(range(1, 9)), with_exact=True)
        assert [report.n for report in reports] == list(range(1, 9))
        for report in reports:
            assert report.exact_certified
            assert report.brackets_exact()
        assert reports[6].exact == pytest.approx(-0.2157, abs=2e-4)
        assert reports[7].exact == pytest.approx(-0.2188, abs=2e-4)
        last = reports[-1]
        assert last.lower <= -instance.d1 <= last.upper

    def test_self_pool_has_zero_d1(self, self_instance):
        reports = bound_sweep(self_instance, [1, 5, 9])
        assert all(abs(report.d1) < 1e-12 for report in reports)

    def test_sorted_and_deduplicated(self, fixture_instance):
        assert [report.n for report in bound_sweep(fixture_instance, [7, 1, 7, 3])] == [1, 3, 7]

    def test_deterministic(self, fixture_instance):
        first = bound_sweep(fixture_instance, [1, 2, 3], with_exact=True)
        second = bound_sweep(fixture_instance, [3, 2, 1], with_exact=True)
        assert first == second

    def test_invalid_n_list(self, fixture_instance):
        with pytest.raises(InvalidParameterError):
            bound_sweep(fixture_instance, [])
        with pytest.raises(InvalidParameterError):
            bound_sweep(fixture_instance, [0, 1])
