"""
Trace-norm covering nets over finite pools of states, the delta_n schedule
and the tensor-power distance inequality
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from .config import DEFAULT_CONFIG, NumericalConfig
from .errors import BoundViolationError, InvalidParameterError
from .hermitian import State, kron_power, trace_norm

logger = logging.getLogger(__name__)

DEDUP_TOLERANCE = 1e-12


@dataclass
class CoveringNet:
    delta: float
    members: List[State]
    member_indices: List[int]
    achieved_radius: float
    pool_size: int
    dim: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def real_dimension(self) -> int:
        return (self.dim + 1) * self.dim // 2

    @property
    def cardinality_bound(self) -> float:
        """min(|pool|, (1 + 2/delta)^D), compared in log space"""
        if self.delta <= 0:
            return float(self.pool_size)
        log_bound = self.real_dimension * math.log1p(2.0 / self.delta)
        if log_bound > math.log(self.pool_size):
            return float(self.pool_size)
        return math.exp(log_bound)


def pairwise_trace_distances(pool: Sequence[State], config: NumericalConfig = DEFAULT_CONFIG) -> np.ndarray:
    size = len(pool)
    distances = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1, size):
            distances[i, j] = distances[j, i] = trace_norm(pool[i].matrix - pool[j].matrix, config)
    return distances


def build_net(pool: Sequence[State], delta: float, config: NumericalConfig = DEFAULT_CONFIG) -> CoveringNet:
    """
    Greedy farthest-point net: start from pool[0], repeatedly add the pool
    element farthest from the current net until every element is within delta.
    Ties go to the lowest pool index. delta = 0 deduplicates at 1e-12.
    """
    if not pool:
        raise InvalidParameterError("Cannot build a net over an empty pool")
    if delta < 0 or math.isnan(delta):
        raise InvalidParameterError(f"delta must be >= 0, got {delta}")

    radius_target = max(delta, DEDUP_TOLERANCE)
    distances = pairwise_trace_distances(pool, config)

    indices = [0]
    nearest = distances[0].copy()
    while True:
        farthest = int(np.argmax(nearest))
        if nearest[farthest] <= radius_target + 1e-12 * max(1.0, radius_target):
            break
        indices.append(farthest)
        nearest = np.minimum(nearest, distances[farthest])

    net = CoveringNet(
        delta=float(delta),
        members=[pool[i] for i in indices],
        member_indices=indices,
        achieved_radius=float(np.max(nearest)),
        pool_size=len(pool),
        dim=pool[0].dim,
    )
    logger.debug(f"Net over {len(pool)} states at delta={delta}: {net.size} members, radius {net.achieved_radius:.3e}")
    return net


def delta_schedule(epsilon: float, n: int, is_finite_family: bool) -> float:
    """0 for finite families, epsilon / (2 n^2) otherwise"""
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if is_finite_family:
        return 0.0
    return epsilon / (2.0 * n * n)


def tensor_distance_check(rho: State, rho_prime: State, n: int, cap: Optional[int] = None,
                          config: NumericalConfig = DEFAULT_CONFIG) -> Tuple[float, float]:
    """(||rho^n - rho'^n||_1, n ||rho - rho'||_1); the first never exceeds the second"""
    lhs = trace_norm(kron_power(rho, n, cap, config).matrix - kron_power(rho_prime, n, cap, config).matrix, config)
    rhs = n * trace_norm(rho.matrix - rho_prime.matrix, config)
    if lhs > rhs + 1e-9:
        raise BoundViolationError(f"Tensor distance {lhs!r} exceeds n times single-copy distance {rhs!r}")
    return lhs, rhs


def tensor_covering_radius(pool: Sequence[State], net: CoveringNet, n: int, cap: Optional[int] = None,
                           config: NumericalConfig = DEFAULT_CONFIG) -> float:
    """sup over the pool of inf over the net of ||rho^n - rho'^n||_1"""
    powers = [kron_power(member, n, cap, config).matrix for member in net.members]
    radius = 0.0
    for state in pool:
        power = kron_power(state, n, cap, config).matrix
        radius = max(radius, min(trace_norm(power - other, config) for other in powers))
    return radius
