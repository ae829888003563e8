"""
Quantum Renyi divergences - the traditional (old) and sandwiched (new) families,
Umegaki relative entropy, Renyi entropy, kappa and the binary entropy function.
All logarithms are natural; powers are taken on supports only.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union
import logging

import numpy as np

from .config import DEFAULT_CONFIG, NumericalConfig
from .errors import InvalidParameterError, SupportViolationError
from .hermitian import (
    HermitianOperator,
    OperatorLike,
    as_operator,
    log_on_support,
    power_on_support,
    support_leq,
    support_values,
    trace_power,
)

logger = logging.getLogger(__name__)


class DivergenceFamily(Enum):
    OLD = "old"
    NEW = "new"
    UMEGAKI = "umegaki"


@dataclass(frozen=True)
class DivergenceValue:
    """A divergence value; +inf is an explicit, defined outcome"""
    value: float
    alpha: float
    family: DivergenceFamily

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def format(self, digits: int = 12) -> str:
        if self.is_infinite:
            return "INF" if self.value > 0 else "-INF"
        return f"{self.value:.{digits}g}"

    def __float__(self) -> float:
        return self.value


def _validate_alpha(alpha: float, allow_one: bool = False) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0:
        raise InvalidParameterError(f"alpha must lie in (0, inf), got {alpha}")
    if alpha == 1.0 and not allow_one:
        raise InvalidParameterError("alpha = 1 is excluded; use d_umegaki")
    return alpha


def q_old(rho: OperatorLike, sigma: OperatorLike, alpha: float,
          config: NumericalConfig = DEFAULT_CONFIG) -> float:
    """Tr rho^alpha sigma^(1-alpha)"""
    alpha = _validate_alpha(alpha)
    rho_power = power_on_support(rho, alpha, config).matrix
    sigma_power = power_on_support(sigma, 1.0 - alpha, config).matrix
    return float(np.trace(rho_power @ sigma_power).real)


def q_new(rho: OperatorLike, sigma: OperatorLike, alpha: float,
          config: NumericalConfig = DEFAULT_CONFIG) -> float:
    """Tr (sigma^((1-alpha)/2alpha) rho sigma^((1-alpha)/2alpha))^alpha"""
    alpha = _validate_alpha(alpha)
    sandwich = power_on_support(sigma, (1.0 - alpha) / (2.0 * alpha), config).matrix
    inner = HermitianOperator.from_product(sandwich @ as_operator(rho).matrix @ sandwich)
    return trace_power(inner, alpha, config)


def _from_core(core: float, rho: OperatorLike, alpha: float, family: DivergenceFamily) -> DivergenceValue:
    if core <= 0.0:
        # log 0 = -inf, and 1/(alpha-1) < 0 here
        return DivergenceValue(math.inf, alpha, family)
    value = (math.log(core) - math.log(as_operator(rho).trace())) / (alpha - 1.0)
    return DivergenceValue(value, alpha, family)


def d_old(rho: OperatorLike, sigma: OperatorLike, alpha: float,
          config: NumericalConfig = DEFAULT_CONFIG) -> DivergenceValue:
    alpha = _validate_alpha(alpha, allow_one=True)
    if alpha == 1.0:
        return d_umegaki(rho, sigma, config)
    if alpha > 1.0 and not support_leq(rho, sigma, config):
        return DivergenceValue(math.inf, alpha, DivergenceFamily.OLD)
    return _from_core(q_old(rho, sigma, alpha, config), rho, alpha, DivergenceFamily.OLD)


def d_new(rho: OperatorLike, sigma: OperatorLike, alpha: float,
          config: NumericalConfig = DEFAULT_CONFIG) -> DivergenceValue:
    alpha = _validate_alpha(alpha, allow_one=True)
    if alpha == 1.0:
        return d_umegaki(rho, sigma, config)
    if alpha > 1.0 and not support_leq(rho, sigma, config):
        return DivergenceValue(math.inf, alpha, DivergenceFamily.NEW)
    return _from_core(q_new(rho, sigma, alpha, config), rho, alpha, DivergenceFamily.NEW)


def d_umegaki(rho: OperatorLike, sigma: OperatorLike,
              config: NumericalConfig = DEFAULT_CONFIG) -> DivergenceValue:
    """(1/Tr rho) Tr rho (log rho - log sigma), +inf unless supp rho <= supp sigma"""
    if not support_leq(rho, sigma, config):
        return DivergenceValue(math.inf, 1.0, DivergenceFamily.UMEGAKI)
    rho_op = as_operator(rho)
    values = support_values(rho_op, config)
    rho_log_rho = float(np.sum(values * np.log(values)))
    rho_log_sigma = float(np.trace(rho_op.matrix @ log_on_support(sigma, config).matrix).real)
    return DivergenceValue((rho_log_rho - rho_log_sigma) / rho_op.trace(), 1.0, DivergenceFamily.UMEGAKI)


def divergence(rho: OperatorLike, sigma: OperatorLike, alpha: Optional[float],
               family: Union[str, DivergenceFamily],
               config: NumericalConfig = DEFAULT_CONFIG) -> DivergenceValue:
    """Dispatch on the family name"""
    family = DivergenceFamily(family)
    if family is DivergenceFamily.UMEGAKI:
        return d_umegaki(rho, sigma, config)
    if alpha is None:
        raise InvalidParameterError(f"Family '{family.value}' needs alpha")
    if family is DivergenceFamily.OLD:
        return d_old(rho, sigma, alpha, config)
    return d_new(rho, sigma, alpha, config)


def renyi_entropy(rho: OperatorLike, alpha: float, config: NumericalConfig = DEFAULT_CONFIG) -> float:
    """S_alpha(rho) = (log Tr rho^alpha - log Tr rho) / (1 - alpha)"""
    alpha = _validate_alpha(alpha)
    trace = as_operator(rho).trace()
    return (math.log(trace_power(rho, alpha, config)) - math.log(trace)) / (1.0 - alpha)


def von_neumann_entropy(rho: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> float:
    values = support_values(rho, config)
    trace = float(np.sum(values))
    return -float(np.sum(values * np.log(values))) / trace + math.log(trace)


def kappa(rho: OperatorLike, sigma: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> float:
    """log(1 + Tr rho^(3/2) sigma^(-1/2) + Tr rho^(1/2) sigma^(1/2))"""
    if not support_leq(rho, sigma, config):
        raise SupportViolationError("kappa requires supp rho to lie in supp sigma")
    rho_high = power_on_support(rho, 1.5, config).matrix
    rho_low = power_on_support(rho, 0.5, config).matrix
    sigma_inv_sqrt = power_on_support(sigma, -0.5, config).matrix
    sigma_sqrt = power_on_support(sigma, 0.5, config).matrix
    first = float(np.trace(rho_high @ sigma_inv_sqrt).real)
    second = float(np.trace(rho_low @ sigma_sqrt).real)
    return math.log(1.0 + first + second)


def d_new_floor(rho: OperatorLike, sigma: OperatorLike, alpha: float,
                config: NumericalConfig = DEFAULT_CONFIG) -> float:
    """
    Lower bound on d_new(rho||sigma) through d_old, for a density operator rho:

        alpha < 1:  alpha d_old - (1 - alpha) log dim
        alpha > 1:  alpha d_old + (alpha - 1) log lambda_min(sigma)

    Above one the operator norm of sigma^((1-alpha)/alpha) is set by the
    smallest eigenvalue of sigma on its support, not by ||sigma||.
    """
    alpha = _validate_alpha(alpha)
    old = d_old(rho, sigma, alpha, config).value
    if not math.isfinite(old):
        return -math.inf
    if alpha < 1.0:
        return alpha * old - (1.0 - alpha) * math.log(as_operator(rho).dim)
    smallest = float(support_values(sigma, config)[0])
    return alpha * old + (alpha - 1.0) * math.log(smallest)


def binary_entropy(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameterError(f"binary entropy needs alpha in [0, 1], got {alpha}")
    if alpha in (0.0, 1.0):
        return 0.0
    return -alpha * math.log(alpha) - (1.0 - alpha) * math.log(1.0 - alpha)


def classical_renyi(p: Sequence[float], q: Sequence[float], alpha: float) -> float:
    """Renyi divergence of probability vectors; both quantum families reduce to it"""
    alpha = _validate_alpha(alpha)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if alpha > 1.0 and np.any((p > 0) & (q <= 0)):
        return math.inf
    both = (p > 0) & (q > 0)
    core = float(np.sum(p[both] ** alpha * q[both] ** (1.0 - alpha)))
    if core <= 0.0:
        return math.inf
    return (math.log(core) - math.log(float(np.sum(p)))) / (alpha - 1.0)
