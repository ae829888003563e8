#!/usr/bin/env python3
"""
Command-line interface for the quantum Stein bounds toolkit
Subcommands: divergence, sweep, verify, net, oracle
"""

import argparse
import asyncio
import os
import sys
from typing import List, Optional

# Add the project root to Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from main import ExperimentCommand, ExperimentConfig, ExperimentManager, configure_logging


class ExperimentCLI:
    """
    Parses arguments into an ExperimentConfig and hands it to the manager
    """

    def __init__(self):
        self.parser = self.build_parser()

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog='cli.py',
            description='Quantum Renyi divergences, finite-size Stein bounds and exact optimal test errors',
        )
        subparsers = parser.add_subparsers(dest='command', required=True)

        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--seed', type=int, default=0, help='seed for random pools and property suites')
        common.add_argument('--cap', type=int, default=None, help='largest tensor-power dimension (default 4096)')
        common.add_argument('--out', default=None, help='write the output to FILE instead of stdout')
        common.add_argument('--verbose', action='store_true', help='log progress to stderr')

        instance = argparse.ArgumentParser(add_help=False)
        instance.add_argument('--sigma', help='alternative hypothesis state file')
        instance.add_argument('--pool', nargs='+', default=[], metavar='FILE', help='null hypothesis state files')
        instance.add_argument('--random-pool', type=int, default=0, metavar='K',
                              help='append K seeded random states to the pool')
        instance.add_argument('--epsilon', type=float, default=0.05, help='type I error level in (0, 1)')
        instance.add_argument('--infinite', action='store_true',
                              help='treat the pool as a sample of an infinite family')

        divergence = subparsers.add_parser('divergence', parents=[common], help='evaluate a Renyi divergence')
        divergence.add_argument('--rho', required=True, help='first argument state file')
        divergence.add_argument('--sigma', required=True, help='second argument state file')
        divergence.add_argument('--family', choices=['old', 'new', 'umegaki'], default='new')
        divergence.add_argument('--alpha', type=float, default=None)

        sweep = subparsers.add_parser('sweep', parents=[common, instance], help='CSV of bounds over a range of n')
        sweep.add_argument('--n-min', type=int, default=1)
        sweep.add_argument('--n-max', type=int, default=8)
        sweep.add_argument('--exact', action='store_true', help='add the exact rate from the optimal test')
        sweep.add_argument('--delta', type=float, default=None, help='override the delta_n schedule')

        verify = subparsers.add_parser('verify', parents=[common], help='run every property suite')
        verify.add_argument('--trials', type=int, default=20, help='random cases per suite')
        verify.add_argument('--rho', default=None, help='extra operator file to validate')
        verify.add_argument('--sigma', default=None, help='extra operator file to validate')
        verify.add_argument('--pool', nargs='+', default=[], metavar='FILE', help='extra operator files to validate')

        net = subparsers.add_parser('net', parents=[common], help='greedy covering net over a pool')
        net.add_argument('--pool', nargs='+', default=[], metavar='FILE')
        net.add_argument('--random-pool', type=int, default=0, metavar='K')
        net.add_argument('--sigma', default=None, help='fixes the dimension of a purely random pool')
        net.add_argument('--delta', type=float, default=0.0)

        oracle = subparsers.add_parser('oracle', parents=[common, instance], help='exact beta_epsilon at one n')
        oracle.add_argument('--n', type=int, default=1, help='number of copies')

        return parser

    def to_config(self, args: argparse.Namespace) -> ExperimentConfig:
        return ExperimentConfig(
            rho_path=getattr(args, 'rho', None),
            sigma_path=getattr(args, 'sigma', None),
            pool_paths=list(getattr(args, 'pool', [])),
            alpha=getattr(args, 'alpha', None),
            family=getattr(args, 'family', 'new'),
            epsilon=getattr(args, 'epsilon', 0.05),
            n_min=getattr(args, 'n_min', 1),
            n_max=getattr(args, 'n_max', 8),
            n=getattr(args, 'n', 1),
            with_exact=getattr(args, 'exact', False),
            seed=args.seed,
            delta=getattr(args, 'delta', None),
            out=args.out,
            cap=args.cap,
            infinite=getattr(args, 'infinite', False),
            random_pool=getattr(args, 'random_pool', 0),
            trials=getattr(args, 'trials', 20),
        )

    def emit(self, text: str, out: Optional[str]) -> None:
        if out:
            with open(out, 'w', encoding='utf-8', newline='') as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)

    async def run(self, argv: Optional[List[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        configure_logging('DEBUG' if args.verbose else 'WARNING')

        manager = ExperimentManager()
        response = await manager.process_command(ExperimentCommand(args.command), self.to_config(args))

        # a failed verification still carries its report
        if response.data is not None:
            self.emit(response.output, args.out)
        else:
            print(response.output, file=sys.stderr)
        return response.exit_code


async def main(argv: Optional[List[str]] = None) -> int:
    cli = ExperimentCLI()
    return await cli.run(argv)


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
