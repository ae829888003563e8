"""
Finite-size Stein bounds

Single-pair bounds on log beta_epsilon(rho||sigma) and the composite-null
bracket on (1/n) log beta_epsilon(N||sigma^n) with its parameter schedule
(c, a*, delta_n), plus the per-n sweep that feeds the CSV experiments.
"""

import asyncio
import math
from dataclasses import dataclass
from functools import cached_property, partial
from typing import Iterable, List, Optional, Sequence
import logging

from .config import DEFAULT_CONFIG, NumericalConfig
from .covering_net import CoveringNet, build_net, delta_schedule
from .divergence import binary_entropy, d_old, d_umegaki, kappa
from .errors import (
    BoundViolationError,
    InvalidParameterError,
    MemoryCapExceeded,
    ScheduleInfeasibleError,
    SupportViolationError,
)
from .hermitian import State, kron_power, support_leq, trace_power
from .np_oracle import NeymanPearsonOracle

logger = logging.getLogger(__name__)

SQRT2_4 = 4.0 * math.sqrt(2.0)


@dataclass
class HypothesisInstance:
    """Composite null N (finite pool or a sample of it) against sigma at level epsilon"""
    null_pool: List[State]
    sigma: State
    epsilon: float
    is_finite_family: bool = True

    def __post_init__(self):
        if not self.null_pool:
            raise InvalidParameterError("Null pool must not be empty")
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidParameterError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        for index, rho in enumerate(self.null_pool):
            if rho.dim != self.sigma.dim:
                raise InvalidParameterError(f"Pool state {index} has dim {rho.dim}, sigma has {self.sigma.dim}")
            if not support_leq(rho, self.sigma):
                raise SupportViolationError(f"Pool state {index} is not supported inside supp sigma")

    @property
    def dim(self) -> int:
        return self.sigma.dim

    @cached_property
    def d1(self) -> float:
        return d1_inf(self)

    @cached_property
    def kappa_max(self) -> float:
        return kappa_max(self)


@dataclass
class ScheduleParams:
    c: float
    a_star: float
    alpha: float        # 1 - a*/sqrt(n)
    log_term: float     # log(2 |N_delta| / epsilon)


@dataclass
class BoundReport:
    n: int
    lower: float
    upper: float
    upper_clamped: float
    d1: float
    kappa_max: float
    net_size: int
    delta: float
    schedule_feasible: bool
    exact: Optional[float] = None
    exact_certified: Optional[bool] = None
    warning: str = ""

    def brackets_exact(self, slack: float = 1e-6) -> bool:
        if self.exact is None:
            return True
        return self.lower - slack <= self.exact <= self.upper_clamped + slack


@dataclass
class SecondOrderBracket:
    n: int
    deviation: float    # sqrt(n) ((1/n) log beta + D1)
    lower: float
    upper: float

    @property
    def contains(self) -> bool:
        return self.lower - 1e-6 <= self.deviation <= self.upper + 1e-6


def d1_inf(instance: HypothesisInstance) -> float:
    """D1(N||sigma) = min over the pool of the Umegaki relative entropy"""
    return min(d_umegaki(rho, instance.sigma).value for rho in instance.null_pool)


def kappa_max(instance: HypothesisInstance) -> float:
    value = max(kappa(rho, instance.sigma) for rho in instance.null_pool)
    ceiling = math.log(2.0 + trace_power(instance.sigma, -0.5))
    if value > ceiling + 1e-9:
        raise BoundViolationError(f"kappa_max {value!r} exceeds log(2 + Tr sigma^-1/2) = {ceiling!r}")
    return value


def amv_upper(rho: State, sigma: State, epsilon: float, alpha: float) -> float:
    """Upper bound on log beta_epsilon(rho||sigma) through the old divergence at alpha in (0, 1)"""
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    divergence = d_old(rho, sigma, alpha).value
    return -divergence + alpha / (1.0 - alpha) * math.log(1.0 / epsilon) - binary_entropy(alpha) / (1.0 - alpha)


def amv_lower(rho: State, sigma: State, epsilon: float, n: int) -> float:
    """Lower bound on (1/n) log beta_epsilon(rho^n||sigma^n)"""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    k = kappa(rho, sigma)
    return -d_umegaki(rho, sigma).value - SQRT2_4 / math.sqrt(n) * k * math.log(1.0 / (1.0 - epsilon))


def _log_term(net_size: int, epsilon: float) -> float:
    return math.log(2.0 * net_size / epsilon)


def schedule_params(n: int, net_size: int, epsilon: float, kappa_max: float,
                    dim: int, d1: float) -> ScheduleParams:
    """
    cosh c = 2 + L/n and a* = sqrt(L) [4 kappa^2 cosh c + log d + D1]^(-1/2),
    L = log(2 |N_delta| / epsilon). Raises ScheduleInfeasibleError when a*/sqrt(n)
    exceeds 1/2 or c / (2 kappa_max).
    """
    if n < 1 or net_size < 1:
        raise InvalidParameterError(f"n and net_size must be >= 1, got {n}, {net_size}")
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1), got {epsilon}")

    log_term = _log_term(net_size, epsilon)
    cosh_c = 2.0 + log_term / n
    c = math.acosh(cosh_c)
    a_star = math.sqrt(log_term / (4.0 * kappa_max ** 2 * cosh_c + math.log(dim) + d1))
    step = a_star / math.sqrt(n)
    if step > 0.5 or step > c / (2.0 * kappa_max):
        raise ScheduleInfeasibleError(
            f"a*/sqrt(n) = {step:.6f} violates min(1/2, c/(2 kappa_max)) = {min(0.5, c / (2.0 * kappa_max)):.6f} at n={n}"
        )
    return ScheduleParams(c=c, a_star=a_star, alpha=1.0 - step, log_term=log_term)


def _resolve_net(instance: HypothesisInstance, n: int, delta_n: Optional[float]) -> CoveringNet:
    if delta_n is None:
        delta_n = delta_schedule(instance.epsilon, n, instance.is_finite_family)
    if not 0.0 <= delta_n <= instance.epsilon / (2.0 * n):
        raise InvalidParameterError(f"delta_n must lie in [0, epsilon/(2n)] = [0, {instance.epsilon / (2.0 * n)}], got {delta_n}")
    # a finite family is its own net
    if instance.is_finite_family:
        delta_n = 0.0
    return build_net(instance.null_pool, delta_n)


def _upper_formula(d1: float, kappa: float, dim: int, log_term: float, n: int) -> float:
    root = math.sqrt(log_term / n) * 2.0 * math.sqrt(8.0 * kappa ** 2 + math.log(dim) + d1)
    return -d1 + root + log_term / n * 4.0 * kappa


def stein_upper(instance: HypothesisInstance, n: int, delta_n: Optional[float] = None) -> float:
    """Raw upper bound on (1/n) log beta_epsilon(N||sigma^n); may be positive for small n"""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    net = _resolve_net(instance, n, delta_n)
    return _upper_formula(instance.d1, instance.kappa_max, instance.dim, _log_term(net.size, instance.epsilon), n)


def optimized_upper(instance: HypothesisInstance, n: int, delta_n: Optional[float] = None) -> float:
    """The bound at a = a* before cosh c is relaxed to 2 + L/n; never above stein_upper"""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    net = _resolve_net(instance, n, delta_n)
    log_term = _log_term(net.size, instance.epsilon)
    cosh_c = 2.0 + log_term / n
    inner = 4.0 * instance.kappa_max ** 2 * cosh_c + math.log(instance.dim) + instance.d1
    return -instance.d1 + 2.0 / math.sqrt(n) * math.sqrt(inner * log_term)


def stein_lower(instance: HypothesisInstance, n: int) -> float:
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    return -instance.d1 - SQRT2_4 / math.sqrt(n) * math.log(1.0 / (1.0 - instance.epsilon)) * instance.kappa_max


def second_order_bracket(instance: HypothesisInstance, n: int, exact: float,
                         delta_n: Optional[float] = None) -> SecondOrderBracket:
    """sqrt(n) ((1/n) log beta + D1) against the scaled lower and upper corrections"""
    scale = math.sqrt(n)
    return SecondOrderBracket(
        n=n,
        deviation=scale * (exact + instance.d1),
        lower=scale * (stein_lower(instance, n) + instance.d1),
        upper=scale * (stein_upper(instance, n, delta_n) + instance.d1),
    )


def _exact_rate(instance: HypothesisInstance, net: CoveringNet, n: int, cap: Optional[int],
                config: NumericalConfig):
    oracle = NeymanPearsonOracle(config)
    family = instance.null_pool if len(instance.null_pool) <= oracle.max_nulls else net.members
    if len(family) > oracle.max_nulls:
        return None, None, f"net of {len(family)} states exceeds oracle limit {oracle.max_nulls}"

    try:
        sigma_n = kron_power(instance.sigma, n, cap, config)
        nulls = [kron_power(rho, n, cap, config) for rho in family]
    except MemoryCapExceeded as e:
        logger.warning(f"Skipping exact beta at n={n}: {e}")
        return None, None, f"memory cap: {e}"

    solution = oracle.solve(nulls, sigma_n, instance.epsilon)
    beta = solution.primal_value
    rate = math.log(beta) / n if beta > 0 else -math.inf
    warning = "" if solution.certified else f"oracle gap {solution.gap:.3e}"
    return rate, solution.certified, warning


def bound_report(instance: HypothesisInstance, n: int, with_exact: bool = False,
                 delta_n: Optional[float] = None, cap: Optional[int] = None,
                 config: NumericalConfig = DEFAULT_CONFIG) -> BoundReport:
    """Bracket, schedule flag and optionally the exact rate for a single n"""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    net = _resolve_net(instance, n, delta_n)
    d1, kappa_value = instance.d1, instance.kappa_max
    log_term = _log_term(net.size, instance.epsilon)

    try:
        schedule_params(n, net.size, instance.epsilon, kappa_value, instance.dim, d1)
        feasible = True
    except ScheduleInfeasibleError as e:
        logger.warning(f"Upper bound at n={n} is heuristic: {e}")
        feasible = False

    upper = _upper_formula(d1, kappa_value, instance.dim, log_term, n)
    report = BoundReport(
        n=n,
        lower=stein_lower(instance, n),
        upper=upper,
        upper_clamped=min(0.0, upper),
        d1=d1,
        kappa_max=kappa_value,
        net_size=net.size,
        delta=net.delta,
        schedule_feasible=feasible,
    )
    if with_exact:
        report.exact, report.exact_certified, report.warning = _exact_rate(instance, net, n, cap, config)
    return report


def _validate_n_list(n_list: Iterable[int]) -> List[int]:
    values = sorted(set(int(n) for n in n_list))
    if not values:
        raise InvalidParameterError("n_list must not be empty")
    if values[0] < 1:
        raise InvalidParameterError(f"n must be >= 1, got {values[0]}")
    return values


async def bound_sweep_async(instance: HypothesisInstance, n_list: Sequence[int], with_exact: bool = False,
                            delta_n: Optional[float] = None, cap: Optional[int] = None,
                            config: NumericalConfig = DEFAULT_CONFIG) -> List[BoundReport]:
    """Reports for distinct n evaluated concurrently; returned in n order"""
    values = _validate_n_list(n_list)
    # computed once, before the worker threads share the instance
    _ = instance.d1, instance.kappa_max
    loop = asyncio.get_running_loop()
    tasks = [
        loop.run_in_executor(None, partial(bound_report, instance, n, with_exact, delta_n, cap, config))
        for n in values
    ]
    reports = await asyncio.gather(*tasks)
    logger.info(f"Sweep finished for n in [{values[0]}, {values[-1]}] ({len(values)} values, exact={with_exact})")
    return sorted(reports, key=lambda report: report.n)


def bound_sweep(instance: HypothesisInstance, n_list: Sequence[int], with_exact: bool = False,
                delta_n: Optional[float] = None, cap: Optional[int] = None,
                config: NumericalConfig = DEFAULT_CONFIG) -> List[BoundReport]:
    return asyncio.run(bound_sweep_async(instance, n_list, with_exact, delta_n, cap, config))
