#!/usr/bin/env python3
"""
End-to-end tests of the command-line surface
"""

import asyncio
import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from cli import main
from main import CSV_HEADER, ExperimentCommand, ExperimentConfig, ExperimentManager, format_number


def run_cli(argv):
    return asyncio.run(main(argv))


def output_fields(text):
    return dict(line.split(': ', 1) for line in text.strip().splitlines())


class TestDivergenceCommand:

    def test_old_family_on_fixtures(self, capsys, fixture_path):
        code = run_cli(['divergence', '--rho', fixture_path('pure_zero.json'),
                        '--sigma', fixture_path('maximally_mixed.json'), '--family', 'old', '--alpha', '0.5'])
        assert code == 0
        assert capsys.readouterr().out == "0.69314718056\n"

    def test_umegaki_of_a_state_with_itself(self, capsys, fixture_path):
        path = fixture_path('qutrit_mixed.json')
        assert run_cli(['divergence', '--rho', path, '--sigma', path, '--family', 'umegaki']) == 0
        assert abs(float(capsys.readouterr().out)) < 1e-12

    def test_support_violation_prints_inf(self, capsys, fixture_path):
        code = run_cli(['divergence', '--rho', fixture_path('maximally_mixed.json'),
                        '--sigma', fixture_path('pure_zero.json'), '--family', 'new', '--alpha', '2'])
        assert code == 0
        assert capsys.readouterr().out == "INF\n"

    def test_missing_file_is_invalid_input(self, capsys, tmp_path, fixture_path):
        code = run_cli(['divergence', '--rho', str(tmp_path / 'absent.json'),
                        '--sigma', fixture_path('maximally_mixed.json'), '--alpha', '0.5'])
        captured = capsys.readouterr()
        assert code == 2
        assert captured.out == ""
        assert 'absent.json' in captured.err

    def test_missing_alpha(self, capsys, fixture_path):
        path = fixture_path('pure_zero.json')
        assert run_cli(['divergence', '--rho', path, '--sigma', path, '--family', 'new']) == 2


class TestSweepCommand:

    def sweep_args(self, fixture_path, *extra):
        return ['sweep', '--sigma', fixture_path('maximally_mixed.json'),
                '--pool', fixture_path('diag_09_01.json'), fixture_path('diag_09_01_rotated.json'),
                '--epsilon', '0.05', '--n-min', '1', '--n-max', '3', *extra]

    def test_csv_layout(self, capsys, fixture_path):
        assert run_cli(self.sweep_args(fixture_path, '--exact')) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ','.join(CSV_HEADER)
        assert len(lines) == 4
        rows = [line.split(',') for line in lines[1:]]
        assert [row[0] for row in rows] == ['1', '2', '3']
        for row in rows:
            lower, exact, upper_clamped = float(row[1]), float(row[4]), float(row[3])
            assert lower - 1e-6 <= exact <= upper_clamped + 1e-6
            assert row[7] == '2'
            assert row[8] in ('0', '1')

    def test_repeated_runs_are_byte_identical(self, tmp_path, fixture_path):
        first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
        assert run_cli(self.sweep_args(fixture_path, '--exact', '--out', str(first))) == 0
        assert run_cli(self.sweep_args(fixture_path, '--exact', '--out', str(second))) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_exact_column_blank_without_flag(self, capsys, fixture_path):
        assert run_cli(self.sweep_args(fixture_path)) == 0
        rows = [line.split(',') for line in capsys.readouterr().out.splitlines()[1:]]
        assert all(row[4] == '' for row in rows)

    def test_invalid_epsilon(self, capsys, fixture_path):
        args = self.sweep_args(fixture_path)
        args[args.index('0.05')] = '1.5'
        assert run_cli(args) == 2

    def test_random_pool_infinite_family(self, capsys, fixture_path):
        code = run_cli(['sweep', '--sigma', fixture_path('maximally_mixed.json'), '--random-pool', '6',
                        '--infinite', '--seed', '3', '--n-min', '2', '--n-max', '2'])
        assert code == 0
        row = capsys.readouterr().out.splitlines()[1].split(',')
        assert 1 <= int(row[7]) <= 6


class TestNetCommand:

    def test_large_delta_keeps_one_member(self, capsys, fixture_path):
        code = run_cli(['net', '--sigma', fixture_path('maximally_mixed.json'),
                        '--random-pool', '7', '--delta', '2.5'])
        assert code == 0
        fields = output_fields(capsys.readouterr().out)
        assert fields['net_size'] == '1'
        assert fields['pool_size'] == '7'
        assert fields['members'] == '0'

    def test_orthogonal_pair(self, capsys, fixture_path):
        code = run_cli(['net', '--pool', fixture_path('pure_zero.json'), fixture_path('pure_one.json'),
                        '--delta', '1'])
        assert code == 0
        fields = output_fields(capsys.readouterr().out)
        assert fields['net_size'] == '2'
        assert fields['members'] == '0 1'

    def test_empty_pool(self, capsys):
        assert run_cli(['net', '--delta', '0.5']) == 2


class TestOracleCommand:

    def test_diagonal_instance(self, capsys, fixture_path):
        code = run_cli(['oracle', '--sigma', fixture_path('maximally_mixed.json'),
                        '--pool', fixture_path('pure_zero.json'), '--epsilon', '0.1', '--n', '1'])
        assert code == 0
        fields = output_fields(capsys.readouterr().out)
        assert float(fields['beta']) == pytest.approx(0.45, abs=1e-7)
        assert fields['certified'] == 'true'
        assert float(fields['dual']) <= float(fields['beta']) + 1e-12

    def test_memory_cap(self, capsys, fixture_path):
        code = run_cli(['oracle', '--sigma', fixture_path('maximally_mixed.json'),
                        '--pool', fixture_path('pure_zero.json'), '--n', '4', '--cap', '8'])
        assert code == 2


class TestVerifyCommand:

    def test_single_trial_passes_on_clean_fixtures(self, tmp_path, fixture_path):
        report = tmp_path / 'report.txt'
        pool = [fixture_path(name) for name in ('pure_zero.json', 'diag_09_01.json', 'qutrit_mixed.json')]
        code = run_cli(['verify', '--trials', '1', '--seed', '0', '--pool', *pool, '--out', str(report)])
        lines = report.read_text().splitlines()
        assert [line for line in lines if 'FAILED' in line] == []
        assert lines[-1] == f"{len(lines) - 2}/{len(lines) - 2} properties passed"
        assert code == 0

    def test_corrupted_fixture_fails_and_is_named(self, tmp_path):
        broken = tmp_path / 'broken.json'
        broken.write_text('{"dim": 2, "re": [[1, 0], [0, 0]]')
        report = tmp_path / 'report.txt'
        code = run_cli(['verify', '--trials', '1', '--pool', str(broken), '--out', str(report)])
        assert code != 0
        failing = [line for line in report.read_text().splitlines() if 'FAILED' in line]
        assert any(line.startswith('fixture_files') for line in failing)


class TestManager:

    def test_missing_sigma_is_invalid_input(self):
        manager = ExperimentManager()
        response = asyncio.run(manager.process_command(ExperimentCommand.SWEEP, ExperimentConfig()))
        assert not response.success
        assert response.exit_code == 2
        assert response.data is None

    @pytest.mark.parametrize("value, expected", [
        (None, ''),
        (float('inf'), 'INF'),
        (float('-inf'), '-INF'),
        (0.5, '0.5'),
        (1.0 / 3.0, '0.333333333333'),
    ])
    def test_format_number(self, value, expected):
        assert format_number(value) == expected
