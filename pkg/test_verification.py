#!/usr/bin/env python3
"""
Tests for the property verifier
"""

import math
import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from quantum_stein.verification import PropertyResult, PropertyVerifier, theorem_fixture


class TestPropertyResult:

    def test_margins(self):
        result = PropertyResult(name='demo', module='divergence')
        assert not result.passed
        result.record(0.5)
        result.record(-1e-12)
        assert result.passed
        assert result.worst_margin == pytest.approx(-1e-12)
        result.record(-1e-3)
        assert result.failures == 1
        assert not result.passed

    def test_nan_counts_as_failure(self):
        result = PropertyResult(name='demo', module='hermitian')
        result.record(math.nan)
        assert result.failures == 1

    def test_explicit_failure(self):
        result = PropertyResult(name='demo', module='np_oracle')
        result.fail('broken')
        assert (result.cases, result.failures, result.message) == (1, 1, 'broken')


class TestVerifier:

    RANDOM_SUITES = [
        'eig_reconstruction', 'jacobi_agreement', 'power_round_trip', 'trace_norm_multiplicative',
        'trace_subadditivity', 'alpha_monotonicity', 'limit_at_one', 'tcr', 'power_bound',
        'old_new_chain', 'old_new_bounds', 'concavity_complement', 'superadditivity', 'additivity',
        'positivity', 'renyi_entropy', 'covering_property', 'cardinality_bound', 'net_monotonicity',
        'tensor_distance', 'weak_duality', 'oracle_agreement', 'strong_duality', 'beta_monotonicity',
        'amv_sandwich', 'mixture_reduction',
    ]
    STEIN_SUITES = ['theorem_bracket', 'bracket_shrinkage', 'rate_order', 'stein_consistency', 'second_order_bracket']

    def test_every_suite_is_listed(self):
        assert set(PropertyVerifier().suites) == set(self.RANDOM_SUITES + self.STEIN_SUITES + ['fixture_files'])

    @pytest.mark.parametrize("seed, trials", [(0, 1), (1, 2), (2, 1)])
    def test_random_suites_pass(self, seed, trials):
        results = PropertyVerifier(seed=seed, trials=trials).run(self.RANDOM_SUITES)
        assert [result.name for result in results] == self.RANDOM_SUITES
        for result in results:
            assert result.passed, f"{result.name}: {result.message} (worst margin {result.worst_margin})"

    def test_stein_suites_pass(self):
        verifier = PropertyVerifier(seed=0, trials=1)
        assert verifier.bracket_n_max == 8
        for result in verifier.run(self.STEIN_SUITES):
            assert result.passed, f"{result.name}: {result.message}"

    def test_suites_are_seeded_independently(self):
        alone = PropertyVerifier(seed=5, trials=2).run(['positivity'])[0]
        tcr, together = PropertyVerifier(seed=5, trials=2).run(['tcr', 'positivity'])
        assert tcr.passed, f"tcr: worst margin {tcr.worst_margin}"
        assert alone.worst_margin == together.worst_margin
        assert alone.cases == together.cases

    def test_unknown_suite(self):
        with pytest.raises(KeyError):
            PropertyVerifier().run(['no_such_property'])

    def test_fixture_files(self, tmp_path, fixture_path):
        broken = tmp_path / 'broken.json'
        broken.write_text('not json')
        verifier = PropertyVerifier(fixture_paths=[fixture_path('qutrit_mixed.json'), str(broken)])
        result = verifier.run(['fixture_files'])[0]
        assert result.cases == 2
        assert result.failures == 1
        assert 'broken.json' in result.message

    def test_theorem_fixture(self):
        instance = theorem_fixture()
        assert len(instance.null_pool) == 2
        assert instance.epsilon == 0.05
        assert instance.d1 == pytest.approx(math.log(2) + 0.9 * math.log(0.9) + 0.1 * math.log(0.1))
