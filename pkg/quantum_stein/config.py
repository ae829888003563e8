"""
Numerical configuration - tolerances, memory cap and oracle limits
Defaults can be overridden through environment variables
"""

import os
from dataclasses import dataclass, replace
import logging

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NumericalConfig:
    hermitian_tol: float = 1e-12      # relative to max |entry|
    psd_clip_tol: float = 1e-10
    trace_tol: float = 1e-10
    support_rel_tol: float = 1e-12    # times dim * lambda_max
    jacobi_tol: float = 1e-13
    jacobi_max_sweeps: int = 100
    support_check_tol: float = 1e-9   # times max(1, ||A||) in support_leq
    eig_method: str = "lapack"
    memory_cap: int = 4096            # largest dim**n materialized
    oracle_gap_tol: float = 1e-7
    oracle_max_iter: int = 100_000
    oracle_max_nulls: int = 8

    @classmethod
    def from_env(cls) -> "NumericalConfig":
        """Build a config, reading STEIN_* overrides from the environment"""
        config = cls()
        overrides = {}

        cap = os.getenv('STEIN_MEMORY_CAP')
        if cap:
            overrides['memory_cap'] = int(cap)

        method = os.getenv('STEIN_EIG_METHOD')
        if method:
            if method not in ('lapack', 'jacobi'):
                logger.warning(f"Ignoring unknown STEIN_EIG_METHOD={method}")
            else:
                overrides['eig_method'] = method

        gap = os.getenv('STEIN_ORACLE_GAP_TOL')
        if gap:
            overrides['oracle_gap_tol'] = float(gap)

        max_iter = os.getenv('STEIN_ORACLE_MAX_ITER')
        if max_iter:
            overrides['oracle_max_iter'] = int(max_iter)

        return replace(config, **overrides) if overrides else config


DEFAULT_CONFIG = NumericalConfig.from_env()
