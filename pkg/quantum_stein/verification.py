"""
Property Verifier - Runs the numerical inequality suites of every module on
seeded random instances and reports cases, failures and worst margins
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .config import DEFAULT_CONFIG, NumericalConfig
from .covering_net import build_net, delta_schedule, pairwise_trace_distances, tensor_covering_radius, tensor_distance_check
from .divergence import (
    d_new,
    d_new_floor,
    d_old,
    d_umegaki,
    kappa,
    q_new,
    q_old,
    renyi_entropy,
    von_neumann_entropy,
)
from .errors import SteinError
from .hermitian import (
    HermitianOperator,
    State,
    eig,
    kron_power,
    maximally_mixed,
    mixture,
    power_on_support,
    random_diagonal_state,
    random_pure_state,
    random_state,
    rotated_state,
    trace_norm,
    trace_power,
)
from .np_oracle import BinaryTest, NeymanPearsonOracle, classical_np, dual_value, mixture_beta, type_errors
from .operator_io import load_operator
from .stein_bounds import (
    BoundReport,
    HypothesisInstance,
    amv_lower,
    amv_upper,
    bound_report,
    second_order_bracket,
    stein_lower,
    stein_upper,
)

logger = logging.getLogger(__name__)

ALPHA_GRID_BELOW = [0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95]
ALPHA_GRID_ABOVE = [1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0]


@dataclass
class PropertyResult:
    name: str
    module: str
    cases: int = 0
    failures: int = 0
    worst_margin: float = math.inf
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.failures == 0

    def record(self, margin: float, tol: float = 1e-9) -> None:
        """margin = right-hand side minus left-hand side of an inequality"""
        self.cases += 1
        self.worst_margin = min(self.worst_margin, float(margin))
        if math.isnan(margin) or margin < -tol:
            self.failures += 1

    def fail(self, message: str) -> None:
        self.cases += 1
        self.failures += 1
        self.message = message


def theorem_fixture(epsilon: float = 0.05) -> HypothesisInstance:
    """N = {diag(0.9, 0.1) and its pi/8 rotation}, sigma = I/2"""
    base = State.diagonal([0.9, 0.1])
    return HypothesisInstance([base, rotated_state(base, math.pi / 8)], maximally_mixed(2), epsilon)


class PropertyVerifier:
    """
    Seeded property suites. Each suite draws from its own child generator so a
    suite's cases do not depend on which other suites ran.
    """

    def __init__(self, seed: int = 0, trials: int = 20, fixture_paths: Sequence[str] = (),
                 config: NumericalConfig = DEFAULT_CONFIG):
        self.seed = seed
        self.trials = max(1, int(trials))
        self.fixture_paths = list(fixture_paths)
        self.config = config
        self.oracle = NeymanPearsonOracle(config)
        self.bracket_n_max = 8
        self._fixture_reports: Optional[List[BoundReport]] = None

        self.suites: Dict[str, Tuple[str, Callable]] = {
            'fixture_files': ('cli_experiments', self.check_fixture_files),
            'eig_reconstruction': ('hermitian', self.check_eig_reconstruction),
            'jacobi_agreement': ('hermitian', self.check_jacobi_agreement),
            'power_round_trip': ('hermitian', self.check_power_round_trip),
            'trace_norm_multiplicative': ('hermitian', self.check_trace_norm_multiplicative),
            'trace_subadditivity': ('hermitian', self.check_trace_subadditivity),
            'alpha_monotonicity': ('divergence', self.check_alpha_monotonicity),
            'limit_at_one': ('divergence', self.check_limit_at_one),
            'tcr': ('divergence', self.check_tcr),
            'power_bound': ('divergence', self.check_power_bound),
            'old_new_chain': ('divergence', self.check_old_new_chain),
            'old_new_bounds': ('divergence', self.check_old_new_bounds),
            'concavity_complement': ('divergence', self.check_concavity_complement),
            'superadditivity': ('divergence', self.check_superadditivity),
            'additivity': ('divergence', self.check_additivity),
            'positivity': ('divergence', self.check_positivity),
            'renyi_entropy': ('divergence', self.check_renyi_entropy),
            'covering_property': ('covering_net', self.check_covering_property),
            'cardinality_bound': ('covering_net', self.check_cardinality_bound),
            'net_monotonicity': ('covering_net', self.check_net_monotonicity),
            'tensor_distance': ('covering_net', self.check_tensor_distance),
            'weak_duality': ('np_oracle', self.check_weak_duality),
            'oracle_agreement': ('np_oracle', self.check_oracle_agreement),
            'strong_duality': ('np_oracle', self.check_strong_duality),
            'beta_monotonicity': ('np_oracle', self.check_beta_monotonicity),
            'amv_sandwich': ('np_oracle', self.check_amv_sandwich),
            'mixture_reduction': ('np_oracle', self.check_mixture_reduction),
            'theorem_bracket': ('stein_bounds', self.check_theorem_bracket),
            'bracket_shrinkage': ('stein_bounds', self.check_bracket_shrinkage),
            'rate_order': ('stein_bounds', self.check_rate_order),
            'stein_consistency': ('stein_bounds', self.check_stein_consistency),
            'second_order_bracket': ('stein_bounds', self.check_second_order_bracket),
        }

    def run(self, names: Optional[Sequence[str]] = None) -> List[PropertyResult]:
        selected = list(self.suites) if names is None else list(names)
        unknown = [name for name in selected if name not in self.suites]
        if unknown:
            raise KeyError(f"Unknown property suites: {', '.join(unknown)}")

        children = np.random.SeedSequence(self.seed).spawn(len(self.suites))
        seeds = dict(zip(self.suites, children))
        results = []
        for name in selected:
            module, check = self.suites[name]
            result = PropertyResult(name=name, module=module)
            try:
                check(result, np.random.default_rng(seeds[name]))
            except SteinError as e:
                logger.error(f"Property {name} raised: {e}")
                result.fail(f"{type(e).__name__}: {e}")
            except Exception as e:
                logger.error(f"Property {name} crashed: {str(e)}")
                result.fail(f"unexpected {type(e).__name__}: {e}")
            status = "ok" if result.passed else "FAILED"
            logger.info(f"{name}: {result.cases} cases, {result.failures} failures, worst margin {result.worst_margin:.3e} [{status}]")
            results.append(result)
        return results

    # Instance generation

    @staticmethod
    def _seed(rng: np.random.Generator) -> int:
        return int(rng.integers(2 ** 32))

    def _state(self, rng, dim: int) -> State:
        return random_state(dim, self._seed(rng))

    def _hermitian(self, rng, dim: int) -> HermitianOperator:
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return HermitianOperator.from_product(g)

    def _low_rank_psd(self, rng, dim: int) -> HermitianOperator:
        """Positive operator of random rank and scale"""
        rank = int(rng.integers(1, dim + 1))
        weights = rng.dirichlet(np.ones(rank))
        pure = [random_pure_state(dim, self._seed(rng)) for _ in range(rank)]
        scale = float(rng.uniform(0.2, 3.0))
        return HermitianOperator.from_product(scale * mixture(pure, weights).matrix)

    def _pool(self, rng, size: int, dim: int = 2) -> List[State]:
        return [self._state(rng, dim) if rng.random() < 0.7 else random_pure_state(dim, self._seed(rng))
                for _ in range(size)]

    # cli_experiments

    def check_fixture_files(self, result: PropertyResult, rng) -> None:
        if not self.fixture_paths:
            result.record(0.0)
            return
        for path in self.fixture_paths:
            try:
                load_operator(path)
                result.record(0.0)
            except SteinError as e:
                result.fail(str(e))

    # hermitian

    def check_eig_reconstruction(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            a = self._hermitian(rng, int(rng.integers(2, 7)))
            decomposition = eig(a, config=self.config)
            norm = a.operator_norm()
            error = float(np.max(np.abs(decomposition.reconstruct() - a.matrix)))
            result.record(1e-9 * (1.0 + norm) - error, 0.0)
            vectors = decomposition.eigenvectors
            drift = float(np.max(np.abs(vectors.conj().T @ vectors - np.eye(a.dim))))
            result.record(1e-10 - drift, 0.0)

    def check_jacobi_agreement(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            a = self._hermitian(rng, int(rng.integers(2, 7)))
            jacobi = eig(a, method='jacobi', config=self.config)
            lapack = eig(a, method='lapack', config=self.config)
            tolerance = 1e-9 * (1.0 + a.operator_norm())
            result.record(tolerance - float(np.max(np.abs(jacobi.eigenvalues - lapack.eigenvalues))), 0.0)
            result.record(tolerance - float(np.max(np.abs(jacobi.reconstruct() - a.matrix))), 0.0)

    def check_power_round_trip(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            a = self._low_rank_psd(rng, int(rng.integers(2, 5)))
            identity_power = power_on_support(a, 1.0, self.config)
            result.record(1e-10 * (1.0 + a.operator_norm()) - float(np.max(np.abs(identity_power.matrix - a.matrix))), 0.0)
            for alpha in (0.5, 2.0):
                back = power_on_support(power_on_support(a, alpha, self.config), 1.0 / alpha, self.config)
                result.record(1e-9 * (1.0 + a.operator_norm()) - float(np.max(np.abs(back.matrix - a.matrix))), 0.0)

    def check_trace_norm_multiplicative(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            a = self._hermitian(rng, int(rng.integers(2, 4)))
            b = self._hermitian(rng, int(rng.integers(2, 4)))
            product = trace_norm(a, self.config) * trace_norm(b, self.config)
            joint = trace_norm(a.kron(b), self.config)
            result.record(1e-9 * (1.0 + product) - abs(joint - product), 0.0)

    def check_trace_subadditivity(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            dim = int(rng.integers(2, 5))
            a, b = self._low_rank_psd(rng, dim), self._low_rank_psd(rng, dim)
            for alpha in np.arange(0.1, 1.0, 0.1):
                joint = trace_power(a + b, alpha, self.config)
                separate = trace_power(a, alpha, self.config) + trace_power(b, alpha, self.config)
                result.record(separate - joint)

    # divergence

    def check_alpha_monotonicity(self, result: PropertyResult, rng) -> None:
        grid = [0.1, 0.2, 0.3, 0.4, 0.5] + ALPHA_GRID_BELOW + ALPHA_GRID_ABOVE
        for _ in range(self.trials):
            dim = int(rng.integers(2, 4))
            rho, sigma = self._state(rng, dim), self._state(rng, dim)
            values = [d_old(rho, sigma, alpha, self.config).value for alpha in grid]
            for low, high in zip(values, values[1:]):
                result.record(high - low)

    def check_limit_at_one(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            rho, sigma = self._state(rng, 2), self._state(rng, 2)
            target = d_umegaki(rho, sigma, self.config).value
            for family in (d_old, d_new):
                for alpha in (1.0 - 1e-4, 1.0 + 1e-4):
                    result.record(1e-2 - abs(family(rho, sigma, alpha, self.config).value - target), 0.0)

    def check_tcr(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            dim = int(rng.integers(2, 4))
            rho, sigma = self._state(rng, dim), self._state(rng, dim)
            k = kappa(rho, sigma, self.config)
            result.record(k - math.log(3.0))
            d1 = d_umegaki(rho, sigma, self.config).value
            for c in (0.5, 1.0, 2.0):
                delta = min(0.5, c / (2.0 * k))
                for u in rng.uniform(0.05, 0.95, size=5):
                    below, above = 1.0 - delta * u, 1.0 + delta * u
                    value = d_old(rho, sigma, below, self.config).value
                    result.record(d1 - value)
                    result.record(value - (d1 - 4.0 * (1.0 - below) * k ** 2 * math.cosh(c)))
                    value = d_old(rho, sigma, above, self.config).value
                    result.record(value - d1)
                    result.record(d1 + 4.0 * (above - 1.0) * k ** 2 * math.cosh(c) - value)

    def check_power_bound(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            rho = self._low_rank_psd(rng, int(rng.integers(2, 5)))
            rank = trace_power(rho, 0.0, self.config)
            trace = rho.trace()
            for alpha in rng.uniform(0.01, 0.99, size=5):
                result.record(rank ** (1.0 - alpha) * trace ** alpha - trace_power(rho, alpha, self.config))

    def _sandwich_core(self, rho: State, sigma: State, alpha: float) -> float:
        """Tr (rho^1/2 sigma^((1-alpha)/alpha) rho^1/2)^alpha by direct products"""
        root = power_on_support(rho, 0.5, self.config).matrix
        inner = HermitianOperator.from_product(root @ power_on_support(sigma, (1.0 - alpha) / alpha, self.config).matrix @ root)
        return trace_power(inner, alpha, self.config)

    def check_old_new_chain(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            dim = int(rng.integers(2, 4))
            rho, sigma = self._state(rng, dim), self._state(rng, dim)
            for alpha in ALPHA_GRID_BELOW + ALPHA_GRID_ABOVE:
                old = q_old(rho, sigma, alpha, self.config)
                middle = self._sandwich_core(rho, sigma, alpha)
                # lambda_max(sigma)^((1-alpha)/alpha) below one, lambda_min(sigma)^((1-alpha)/alpha) above
                scale = power_on_support(sigma, (1.0 - alpha) / alpha, self.config).operator_norm()
                right = scale ** (alpha * (1.0 - alpha)) * trace_power(rho, alpha, self.config) ** (1.0 - alpha) * old ** alpha
                sign = 1.0 if alpha < 1.0 else -1.0
                result.record(sign * (middle - old))
                result.record(sign * (right - middle))

    def check_old_new_bounds(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            dim = int(rng.integers(2, 4))
            rho, sigma = self._state(rng, dim), self._state(rng, dim)
            for alpha in ALPHA_GRID_BELOW + ALPHA_GRID_ABOVE:
                old = d_old(rho, sigma, alpha, self.config).value
                new = d_new(rho, sigma, alpha, self.config).value
                result.record(old - new)
                result.record(new - d_new_floor(rho, sigma, alpha, self.config))

    def _random_mixture(self, rng):
        r = int(rng.integers(2, 5))
        dim = int(rng.integers(2, 4))
        states = [self._state(rng, dim) for _ in range(r)]
        weights = rng.dirichlet(np.ones(r))
        return states, weights, mixture(states, weights), self._state(rng, dim)

    def check_concavity_complement(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            states, weights, mixed, sigma = self._random_mixture(rng)
            for alpha in (0.3, 0.5, 0.7, 0.9):
                parts = np.array([q_new(rho, sigma, alpha, self.config) for rho in states])
                joint = q_new(mixed, sigma, alpha, self.config)
                result.record(joint - float(weights @ parts))
                result.record(float(weights ** alpha @ parts) - joint)

    def check_superadditivity(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            states, weights, mixed, sigma = self._random_mixture(rng)
            for alpha in (0.3, 0.5, 0.7, 0.9):
                parts = np.array([d_new(rho, sigma, alpha, self.config).value for rho in states])
                joint = d_new(mixed, sigma, alpha, self.config).value
                result.record(joint - (parts.min() + math.log(weights.min())))
                result.record(float(weights @ parts) - joint)

    def check_additivity(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            rho, sigma = self._state(rng, 2), self._state(rng, 2)
            alpha = float(rng.choice(ALPHA_GRID_BELOW + ALPHA_GRID_ABOVE))
            single = d_new(rho, sigma, alpha, self.config).value
            double = d_new(kron_power(rho, 2), kron_power(sigma, 2), alpha, self.config).value
            result.record(1e-8 - abs(double - 2.0 * single), 0.0)

    def check_positivity(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            dim = int(rng.integers(2, 4))
            rho, sigma = self._state(rng, dim), self._state(rng, dim)
            for alpha in (0.5, 0.9, 1.5, 2.0):
                result.record(d_old(rho, sigma, alpha, self.config).value, 1e-10)
                result.record(d_new(rho, sigma, alpha, self.config).value, 1e-10)
                result.record(1e-10 - abs(d_new(rho, rho, alpha, self.config).value), 0.0)

    def check_renyi_entropy(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            dim = int(rng.integers(2, 4))
            rho = self._state(rng, dim)
            identity = HermitianOperator.identity(dim)
            previous = math.inf
            for alpha in [0.3, 0.6] + ALPHA_GRID_ABOVE[::3]:
                entropy = renyi_entropy(rho, alpha, self.config)
                result.record(1e-9 - abs(entropy + d_old(rho, identity, alpha, self.config).value), 0.0)
                result.record(1e-9 - abs(entropy + d_new(rho, identity, alpha, self.config).value), 0.0)
                result.record(previous - entropy)
                previous = entropy
            limit = von_neumann_entropy(rho, self.config)
            result.record(1e-3 - abs(renyi_entropy(rho, 1.0 + 1e-5, self.config) - limit), 0.0)

    # covering_net

    def _random_net(self, rng):
        pool = self._pool(rng, int(rng.integers(1, 21)))
        delta = float(rng.uniform(0.05, 1.5))
        return pool, build_net(pool, delta, self.config)

    def check_covering_property(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            pool, net = self._random_net(rng)
            distances = pairwise_trace_distances(pool, self.config)
            radius = float(np.max(np.min(distances[:, net.member_indices], axis=1)))
            result.record(net.delta - radius)
            result.record(1e-12 - abs(radius - net.achieved_radius), 0.0)

    def check_cardinality_bound(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            _, net = self._random_net(rng)
            result.record(net.cardinality_bound - net.size, 0.0)

    def check_net_monotonicity(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            pool = self._pool(rng, int(rng.integers(2, 21)))
            deltas = np.sort(rng.uniform(0.0, 2.0, size=4))
            sizes = [build_net(pool, float(delta), self.config).size for delta in deltas]
            for fine, coarse in zip(sizes, sizes[1:]):
                result.record(fine - coarse, 0.0)

    def check_tensor_distance(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            rho, other = self._state(rng, 2), self._state(rng, 2)
            n = int(rng.integers(1, 5))
            lhs, rhs = tensor_distance_check(rho, other, n, config=self.config)
            result.record(rhs - lhs)
            pool, net = self._random_net(rng)
            if len(pool) <= 6:
                radius = tensor_covering_radius(pool, net, n, config=self.config)
                result.record(n * net.achieved_radius - radius)

    # np_oracle

    def _random_test(self, rng, nulls, sigma_n, epsilon: float) -> BinaryTest:
        """Random T0 mixed with I until the type I constraint holds"""
        dim = sigma_n.dim
        values = rng.uniform(0.0, 1.0, size=dim)
        vectors = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))[0]
        t0 = (vectors * values) @ vectors.conj().T
        alpha_worst, _ = type_errors(BinaryTest(HermitianOperator.from_product(t0)), nulls, sigma_n)
        shift = 0.0 if alpha_worst <= epsilon else 1.0 - epsilon / alpha_worst
        return BinaryTest(HermitianOperator.from_product((1.0 - shift) * t0 + shift * np.eye(dim)))

    def _qubit_instance(self, rng, k: int, n: int):
        nulls = [kron_power(self._state(rng, 2), n) for _ in range(k)]
        return nulls, kron_power(self._state(rng, 2), n)

    def check_weak_duality(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            k = int(rng.integers(1, 4))
            nulls, sigma_n = self._qubit_instance(rng, k, int(rng.integers(1, 3)))
            epsilon = float(rng.uniform(0.05, 0.5))
            lambdas = rng.exponential(1.0 / epsilon, size=k)
            lower = dual_value(lambdas, nulls, sigma_n, epsilon, self.config)
            for _ in range(3):
                test = self._random_test(rng, nulls, sigma_n, epsilon)
                _, beta = type_errors(test, nulls, sigma_n)
                result.record(beta - lower)

    def check_oracle_agreement(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            dim = int(rng.integers(2, 9))
            k = int(rng.integers(1, 3))
            epsilon = float(rng.choice([0.05, 0.1, 0.3]))
            nulls = [random_diagonal_state(dim, self._seed(rng)) for _ in range(k)]
            sigma = random_diagonal_state(dim, self._seed(rng))
            solution = self.oracle.solve(nulls, sigma, epsilon)
            classical = classical_np([np.diag(rho.matrix).real for rho in nulls], np.diag(sigma.matrix).real, epsilon)
            result.record(1e-7 - abs(solution.primal_value - classical), 0.0)
            result.record(1e-7 - solution.gap, 0.0)

    def check_strong_duality(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            nulls, sigma_n = self._qubit_instance(rng, int(rng.integers(1, 3)), int(rng.integers(1, 3)))
            epsilon = float(rng.uniform(0.05, 0.5))
            solution = self.oracle.solve(nulls, sigma_n, epsilon)
            result.record(solution.gap + 1e-9, 0.0)
            allowed = 1e-7 if solution.certified else 1e-5
            result.record(allowed - solution.gap, 0.0)
            alpha_worst, _ = type_errors(solution.primal_test, nulls, sigma_n)
            result.record(epsilon + 1e-8 - alpha_worst, 0.0)

    def check_beta_monotonicity(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            nulls, sigma_n = self._qubit_instance(rng, 2, 1)
            low, high = np.sort(rng.uniform(0.05, 0.6, size=2))
            result.record(self.oracle.solve(nulls, sigma_n, low).primal_value
                          - self.oracle.solve(nulls, sigma_n, high).primal_value, 1e-7)
            full = self.oracle.solve(nulls, sigma_n, high).primal_value
            result.record(full - self.oracle.solve(nulls[:1], sigma_n, high).primal_value, 1e-7)

    def check_amv_sandwich(self, result: PropertyResult, rng) -> None:
        epsilon = 0.1
        for _ in range(self.trials):
            rho, sigma = self._state(rng, 2), self._state(rng, 2)
            log_beta = math.log(self.oracle.solve([rho], sigma, epsilon).primal_value)
            for alpha in np.arange(0.2, 0.95, 0.1):
                result.record(amv_upper(rho, sigma, epsilon, float(alpha)) - log_beta, 1e-8)
            result.record(log_beta - amv_lower(rho, sigma, epsilon, 1), 1e-8)

    def check_mixture_reduction(self, result: PropertyResult, rng) -> None:
        for _ in range(self.trials):
            nulls, sigma_n = self._qubit_instance(rng, 2, int(rng.integers(1, 3)))
            epsilon = float(rng.uniform(0.05, 0.5))
            family = self.oracle.solve(nulls, sigma_n, epsilon).primal_value
            reduced = mixture_beta(nulls, sigma_n, epsilon, self.config).primal_value
            result.record(reduced - family, 1e-7)

    # stein_bounds

    def _fixture_sweep(self) -> List[BoundReport]:
        if self._fixture_reports is None:
            instance = theorem_fixture()
            self._fixture_reports = [bound_report(instance, n, with_exact=True, config=self.config)
                                     for n in range(1, self.bracket_n_max + 1)]
        return self._fixture_reports

    def check_theorem_bracket(self, result: PropertyResult, rng) -> None:
        for report in self._fixture_sweep():
            if report.exact is None:
                continue
            result.record(report.exact - report.lower, 1e-6)
            result.record(report.upper_clamped - report.exact, 1e-6)

    def check_stein_consistency(self, result: PropertyResult, rng) -> None:
        instance = theorem_fixture()
        reports = [report for report in self._fixture_sweep() if report.exact is not None]
        last = reports[-1]
        # only the lower side of the distance to -D1 is implied by the bounds
        spread = 4.0 * math.sqrt(2.0) * instance.kappa_max * math.log(1.0 / (1.0 - instance.epsilon)) / math.sqrt(last.n)
        result.record(last.exact + instance.d1 + spread, 1e-6)
        midpoint = (last.lower + last.upper) / 2.0
        half_width = (last.upper - last.lower) / 2.0
        result.record(half_width - abs(midpoint + instance.d1))

    def check_second_order_bracket(self, result: PropertyResult, rng) -> None:
        instance = theorem_fixture()
        for report in self._fixture_sweep():
            if report.exact is None:
                continue
            bracket = second_order_bracket(instance, report.n, report.exact)
            result.record(bracket.deviation - bracket.lower, 1e-6)
            result.record(bracket.upper - bracket.deviation, 1e-6)

    def check_bracket_shrinkage(self, result: PropertyResult, rng) -> None:
        instance = theorem_fixture()
        widths = [stein_upper(instance, n) - stein_lower(instance, n) for n in range(1, 65)]
        for wide, narrow in zip(widths, widths[1:]):
            result.record(wide - narrow)

    def _slope(self, instance: HypothesisInstance, ns: Sequence[int]) -> float:
        excess = [stein_upper(instance, n) + instance.d1 for n in ns]
        return float(np.polyfit(np.log(ns), np.log(excess), 1)[0])

    def check_rate_order(self, result: PropertyResult, rng) -> None:
        finite = theorem_fixture()
        ns = [64, 128, 256, 512, 1024]
        slope = self._slope(finite, ns)
        result.record(slope + 0.6, 0.0)
        result.record(-0.4 - slope, 0.0)

        # same pool read as a finite family and as a sample of an infinite one
        pool = finite.null_pool + self._pool(rng, 8)
        as_finite = HypothesisInstance(pool, finite.sigma, finite.epsilon, is_finite_family=True)
        as_infinite = HypothesisInstance(pool, finite.sigma, finite.epsilon, is_finite_family=False)
        sizes = [build_net(pool, delta_schedule(finite.epsilon, n, False), self.config).size for n in ns]
        for small, large in zip(sizes, sizes[1:]):
            result.record(large - small, 0.0)
        result.record(self._slope(as_infinite, ns) - self._slope(as_finite, ns))
