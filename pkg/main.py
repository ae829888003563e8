#!/usr/bin/env python3
"""
Finite-size quantum Stein bounds toolkit
Experiment Manager - Routes experiment commands to the service modules
"""

import asyncio
import csv
import io
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional
import logging

import numpy as np

from quantum_stein.config import DEFAULT_CONFIG
from quantum_stein.covering_net import build_net
from quantum_stein.divergence import divergence
from quantum_stein.errors import InvalidParameterError, SteinError
from quantum_stein.hermitian import kron_power, random_state
from quantum_stein.np_oracle import NeymanPearsonOracle
from quantum_stein.operator_io import load_operator, load_state
from quantum_stein.stein_bounds import HypothesisInstance, bound_sweep_async
from quantum_stein.verification import PropertyVerifier

logger = logging.getLogger(__name__)

CSV_HEADER = ['n', 'lower', 'upper_raw', 'upper_clamped', 'exact', 'd1', 'kappa_max',
              'net_size', 'schedule_flag', 'warning']


def configure_logging(default_level: str = 'INFO') -> None:
    """LOG_LEVEL from the environment wins over the caller's default"""
    level = os.getenv('LOG_LEVEL', default_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


class ExperimentCommand(Enum):
    DIVERGENCE = "divergence"
    SWEEP = "sweep"
    VERIFY = "verify"
    NET = "net"
    ORACLE = "oracle"


class ExitStatus:
    OK = 0
    FAILED = 1
    INVALID_INPUT = 2


@dataclass
class ExperimentConfig:
    """Inputs shared by all commands; each command validates what it uses"""
    rho_path: Optional[str] = None
    sigma_path: Optional[str] = None
    pool_paths: List[str] = field(default_factory=list)
    alpha: Optional[float] = None
    family: str = "new"
    epsilon: float = 0.05
    n_min: int = 1
    n_max: int = 8
    n: int = 1
    with_exact: bool = False
    seed: int = 0
    delta: Optional[float] = None
    out: Optional[str] = None
    cap: Optional[int] = None
    infinite: bool = False
    random_pool: int = 0
    trials: int = 20

    def validate_epsilon(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidParameterError(f"--epsilon must lie in (0, 1), got {self.epsilon}")

    def validate_n_range(self) -> None:
        if self.n_min < 1 or self.n_max < self.n_min:
            raise InvalidParameterError(f"n range must be non-empty and ascending from 1, got [{self.n_min}, {self.n_max}]")

    @property
    def n_values(self) -> List[int]:
        return list(range(self.n_min, self.n_max + 1))


@dataclass
class ExperimentResponse:
    """Standard response format for all commands"""
    command: ExperimentCommand
    success: bool
    output: str
    exit_code: int = ExitStatus.OK
    data: Optional[Dict[str, Any]] = None


def format_number(value: Optional[float]) -> str:
    """12 significant digits, INF / -INF tokens, blank for a missing value"""
    if value is None:
        return ""
    if math.isinf(value):
        return "INF" if value > 0 else "-INF"
    return f"{value:.12g}"


class ExperimentManager:
    """
    Main manager that loads operator files, assembles instances and dispatches
    to the quantum_stein services
    """

    def __init__(self, config=None):
        self.config = config or DEFAULT_CONFIG

    async def process_command(self, command: ExperimentCommand, settings: ExperimentConfig) -> ExperimentResponse:
        """
        Main entry point; library errors become failed responses
        """
        try:
            logger.info(f"Running command: {command.value}")
            return await self.route_command(command, settings)

        except SteinError as e:
            logger.error(f"Error running {command.value}: {str(e)}")
            return ExperimentResponse(command=command, success=False, output=f"error: {e}",
                                      exit_code=ExitStatus.INVALID_INPUT)
        except Exception as e:
            logger.error(f"Unexpected error running {command.value}: {str(e)}")
            return ExperimentResponse(command=command, success=False, output=f"error: {e}",
                                      exit_code=ExitStatus.FAILED)

    async def route_command(self, command: ExperimentCommand, settings: ExperimentConfig) -> ExperimentResponse:
        if command == ExperimentCommand.DIVERGENCE:
            return self.run_divergence(settings)

        elif command == ExperimentCommand.SWEEP:
            return await self.run_sweep(settings)

        elif command == ExperimentCommand.VERIFY:
            return self.run_verify(settings)

        elif command == ExperimentCommand.NET:
            return self.run_net(settings)

        elif command == ExperimentCommand.ORACLE:
            return self.run_oracle(settings)

        raise ValueError(f"Unsupported command {command}")

    # Input assembly

    def _require(self, path: Optional[str], flag: str) -> str:
        if not path:
            raise InvalidParameterError(f"{flag} is required")
        return path

    def load_pool(self, settings: ExperimentConfig, dim: Optional[int] = None):
        """States from --pool files followed by --random-pool seeded random states"""
        pool = [load_state(path) for path in settings.pool_paths]
        if settings.random_pool > 0:
            dim = pool[0].dim if pool else dim
            if dim is None:
                raise InvalidParameterError("--random-pool needs --pool or --sigma to fix the dimension")
            rng = np.random.default_rng(settings.seed)
            pool += [random_state(dim, int(rng.integers(2 ** 32))) for _ in range(settings.random_pool)]
        if not pool:
            raise InvalidParameterError("A non-empty pool is required (--pool or --random-pool)")
        return pool

    def load_instance(self, settings: ExperimentConfig):
        settings.validate_epsilon()
        sigma = load_state(self._require(settings.sigma_path, "--sigma"))
        pool = self.load_pool(settings, sigma.dim)
        return HypothesisInstance(pool, sigma, settings.epsilon, is_finite_family=not settings.infinite)

    # Commands

    def run_divergence(self, settings: ExperimentConfig) -> ExperimentResponse:
        rho = load_operator(self._require(settings.rho_path, "--rho"))
        sigma = load_operator(self._require(settings.sigma_path, "--sigma"))
        value = divergence(rho, sigma, settings.alpha, settings.family, self.config)
        logger.info(f"D_{settings.family}(alpha={value.alpha}) = {value.format()}")
        return ExperimentResponse(command=ExperimentCommand.DIVERGENCE, success=True, output=value.format() + "\n",
                                  data={'value': value.value, 'alpha': value.alpha, 'family': value.family.value})

    async def run_sweep(self, settings: ExperimentConfig) -> ExperimentResponse:
        settings.validate_n_range()
        instance = self.load_instance(settings)
        reports = await bound_sweep_async(instance, settings.n_values, settings.with_exact,
                                          settings.delta, settings.cap, self.config)
        return ExperimentResponse(command=ExperimentCommand.SWEEP, success=True,
                                  output=self.format_sweep_csv(reports), data={'reports': reports})

    def format_sweep_csv(self, reports) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for report in reports:
            writer.writerow([
                report.n,
                format_number(report.lower),
                format_number(report.upper),
                format_number(report.upper_clamped),
                format_number(report.exact),
                format_number(report.d1),
                format_number(report.kappa_max),
                report.net_size,
                1 if report.schedule_feasible else 0,
                report.warning,
            ])
        return buffer.getvalue()

    def run_verify(self, settings: ExperimentConfig) -> ExperimentResponse:
        fixtures = [path for path in [settings.rho_path, settings.sigma_path] if path] + settings.pool_paths
        verifier = PropertyVerifier(seed=settings.seed, trials=settings.trials, fixture_paths=fixtures,
                                    config=self.config)
        results = verifier.run()

        lines = [f"{'property':<28} {'module':<16} {'cases':>6} {'failures':>8} {'worst_margin':>14}  status"]
        for result in results:
            status = "ok" if result.passed else f"FAILED {result.message}".rstrip()
            lines.append(f"{result.name:<28} {result.module:<16} {result.cases:>6} {result.failures:>8} "
                         f"{format_number(result.worst_margin):>14}  {status}")
        failed = [result.name for result in results if not result.passed]
        lines.append(f"{len(results) - len(failed)}/{len(results)} properties passed")
        if failed:
            logger.warning(f"Failing properties: {', '.join(failed)}")

        return ExperimentResponse(command=ExperimentCommand.VERIFY, success=not failed,
                                  output="\n".join(lines) + "\n",
                                  exit_code=ExitStatus.FAILED if failed else ExitStatus.OK,
                                  data={'results': results})

    def run_net(self, settings: ExperimentConfig) -> ExperimentResponse:
        dim = load_state(settings.sigma_path).dim if settings.sigma_path else None
        pool = self.load_pool(settings, dim)
        net = build_net(pool, 0.0 if settings.delta is None else settings.delta, self.config)
        lines = [
            f"net_size: {net.size}",
            f"pool_size: {net.pool_size}",
            f"delta: {format_number(net.delta)}",
            f"achieved_radius: {format_number(net.achieved_radius)}",
            f"cardinality_bound: {format_number(net.cardinality_bound)}",
            f"members: {' '.join(str(index) for index in net.member_indices)}",
        ]
        return ExperimentResponse(command=ExperimentCommand.NET, success=True, output="\n".join(lines) + "\n",
                                  data={'net': net})

    def run_oracle(self, settings: ExperimentConfig) -> ExperimentResponse:
        if settings.n < 1:
            raise InvalidParameterError(f"--n must be >= 1, got {settings.n}")
        instance = self.load_instance(settings)
        sigma_n = kron_power(instance.sigma, settings.n, settings.cap, self.config)
        nulls = [kron_power(rho, settings.n, settings.cap, self.config) for rho in instance.null_pool]
        solution = NeymanPearsonOracle(self.config).solve(nulls, sigma_n, settings.epsilon)

        rate = math.log(solution.beta) / settings.n if solution.beta > 0 else -math.inf
        lines = [
            f"n: {settings.n}",
            f"beta: {format_number(solution.beta)}",
            f"rate: {format_number(rate)}",
            f"dual: {format_number(solution.dual_value)}",
            f"gap: {format_number(solution.gap)}",
            f"certified: {'true' if solution.certified else 'false'}",
            f"lambdas: {' '.join(format_number(float(value)) for value in solution.lambdas)}",
        ]
        return ExperimentResponse(command=ExperimentCommand.ORACLE, success=True, output="\n".join(lines) + "\n",
                                  data={'solution': solution})


# Example usage
async def main():
    """Run the manager on the bundled fixtures"""
    configure_logging()
    manager = ExperimentManager()
    fixtures = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'fixtures')

    examples = [
        (ExperimentCommand.DIVERGENCE, ExperimentConfig(
            rho_path=os.path.join(fixtures, 'pure_zero.json'),
            sigma_path=os.path.join(fixtures, 'maximally_mixed.json'),
            alpha=0.5, family='old')),
        (ExperimentCommand.NET, ExperimentConfig(
            pool_paths=[os.path.join(fixtures, 'pure_zero.json'), os.path.join(fixtures, 'pure_one.json')],
            delta=1.0)),
        (ExperimentCommand.SWEEP, ExperimentConfig(
            sigma_path=os.path.join(fixtures, 'maximally_mixed.json'),
            pool_paths=[os.path.join(fixtures, 'diag_09_01.json'), os.path.join(fixtures, 'diag_09_01_rotated.json')],
            n_min=1, n_max=4, with_exact=True)),
    ]

    for command, settings in examples:
        print(f"\n{'='*50}")
        print(f"Command: {command.value}")
        print(f"{'='*50}")
        response = await manager.process_command(command, settings)
        print(response.output)


if __name__ == "__main__":
    asyncio.run(main())
