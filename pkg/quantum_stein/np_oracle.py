"""
Neyman-Pearson oracle - exact optimal type-II error beta_epsilon through the
Lagrangian dual of the testing program, with primal certificates

For multipliers lambda >= 0 the inner minimum over tests 0 <= T <= I is closed
form, so the dual is

    g(lambda) = sum_i lambda_i (1 - eps) - ||(sigma - sum_i lambda_i omega_i)_-||_1

and any feasible test gives an upper bound. Since g(lambda) <= 1 - eps sum(lambda),
every maximizer satisfies sum(lambda) <= 1/eps.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np
from scipy.optimize import linprog, minimize_scalar

from .config import DEFAULT_CONFIG, NumericalConfig
from .errors import InvalidParameterError
from .hermitian import HermitianOperator, OperatorLike, as_operator, eig, eigenvalues, mixture, negative_part_trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BinaryTest:
    """(T(0), T(1)) = (t0, I - t0); t0 accepts the null hypothesis"""
    t0: HermitianOperator

    def __post_init__(self):
        values = eigenvalues(self.t0)
        if values[0] < -1e-9 or values[-1] > 1.0 + 1e-9:
            raise InvalidParameterError(
                f"Test operator must satisfy 0 <= T0 <= I, spectrum in [{values[0]:.3e}, {values[-1]:.3e}]"
            )

    @property
    def t1(self) -> HermitianOperator:
        return HermitianOperator(np.eye(self.t0.dim) - self.t0.matrix)


@dataclass
class DualSolution:
    lambdas: np.ndarray
    dual_value: float
    primal_test: BinaryTest
    primal_value: float
    gap: float
    certified: bool
    iterations: int = 0

    @property
    def beta(self) -> float:
        """Achieved feasible type-II error"""
        return self.primal_value


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    return epsilon


def _stack(nulls: Sequence[OperatorLike], sigma_n: OperatorLike) -> Tuple[np.ndarray, np.ndarray]:
    if not nulls:
        raise InvalidParameterError("At least one null state is required")
    sigma = as_operator(sigma_n).matrix
    stack = np.array([as_operator(omega).matrix for omega in nulls])
    if stack.shape[1:] != sigma.shape:
        raise InvalidParameterError(f"Null operators have shape {stack.shape[1:]}, alternative {sigma.shape}")
    return stack, sigma


def dual_value(lambdas: Sequence[float], nulls: Sequence[OperatorLike], sigma_n: OperatorLike,
               epsilon: float, config: NumericalConfig = DEFAULT_CONFIG) -> float:
    """Lagrangian dual of beta_epsilon; a lower bound on it for every lambda >= 0"""
    epsilon = _check_epsilon(epsilon)
    lambdas = np.asarray(lambdas, dtype=float)
    stack, sigma = _stack(nulls, sigma_n)
    if lambdas.shape != (len(stack),) or np.any(lambdas < 0):
        raise InvalidParameterError("lambdas must be non-negative, one per null operator")
    residual = HermitianOperator.from_product(sigma - np.tensordot(lambdas, stack, axes=1))
    return float(lambdas.sum() * (1.0 - epsilon) - negative_part_trace(residual, config))


def type_errors(test: BinaryTest, nulls: Sequence[OperatorLike], sigma_n: OperatorLike) -> Tuple[float, float]:
    """(worst-case type I error over the nulls, type II error)"""
    stack, sigma = _stack(nulls, sigma_n)
    t0 = test.t0.matrix
    alpha_worst = max(float(np.trace(omega).real - np.trace(omega @ t0).real) for omega in stack)
    beta = float(np.trace(sigma @ t0).real)
    return alpha_worst, beta


def _project_capped_simplex(point: np.ndarray, budget: float) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x <= budget}"""
    clipped = np.clip(point, 0.0, None)
    if clipped.sum() <= budget:
        return clipped
    ordered = np.sort(point)[::-1]
    cumulative = np.cumsum(ordered) - budget
    ranks = np.arange(1, len(point) + 1)
    rho = np.nonzero(ordered - cumulative / ranks > 0)[0][-1]
    shift = cumulative[rho] / (rho + 1)
    return np.clip(point - shift, 0.0, None)


def _simplex_weights(weights: np.ndarray) -> np.ndarray:
    """LP mixing weights snapped back onto the probability simplex"""
    clipped = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    total = float(clipped.sum())
    if total <= 0.0:
        clipped = np.zeros_like(clipped)
        clipped[0] = 1.0
        return clipped
    return clipped / total


def _clip_to_unit_interval(matrix: np.ndarray) -> HermitianOperator:
    """Hermitian part of matrix with its spectrum clipped to [0, 1]"""
    op = HermitianOperator.from_product(matrix)
    decomposition = eig(op)
    values = decomposition.eigenvalues
    if values[0] >= 0.0 and values[-1] <= 1.0:
        return op
    return decomposition.apply(np.clip(values, 0.0, 1.0))


@dataclass
class _Evaluation:
    """Dual value, supergradient and eigen data of sigma - sum lambda omega"""
    lambdas: np.ndarray
    value: float
    supergradient: np.ndarray
    shifts: np.ndarray           # eigenvalues of the residual
    vectors: np.ndarray
    null_overlaps: np.ndarray    # <v_j| omega_i |v_j>, shape (k, dim)
    sigma_overlaps: np.ndarray   # <v_j| sigma |v_j>


@dataclass
class _Column:
    """A feasible-or-not test kept for the restricted primal"""
    cost: float
    overlaps: np.ndarray
    matrix: np.ndarray


@dataclass
class _SolverState:
    planes: List[Tuple[np.ndarray, float, np.ndarray]] = field(default_factory=list)
    columns: List[_Column] = field(default_factory=list)
    best: Optional[_Evaluation] = None
    iterations: int = 0


class NeymanPearsonOracle:
    """
    Computes beta_epsilon(M || sigma_n) for a finite list of null operators M
    """

    def __init__(self, config: NumericalConfig = DEFAULT_CONFIG):
        self.config = config
        self.gap_tol = config.oracle_gap_tol
        self.max_iter = config.oracle_max_iter
        self.max_nulls = config.oracle_max_nulls
        self.warm_start_iterations = 60
        self.band_rel_tol = 1e-9
        self.max_columns = 64
        self.feasibility_tol = 1e-9

    # Dual evaluation

    def _evaluate(self, lambdas: np.ndarray, stack: np.ndarray, sigma: np.ndarray, epsilon: float) -> _Evaluation:
        residual = HermitianOperator.from_product(sigma - np.tensordot(lambdas, stack, axes=1))
        decomposition = eig(residual, config=self.config)
        shifts, vectors = decomposition.eigenvalues, decomposition.eigenvectors
        null_overlaps = np.array([np.real(np.sum(vectors.conj() * (omega @ vectors), axis=0)) for omega in stack])
        sigma_overlaps = np.real(np.sum(vectors.conj() * (sigma @ vectors), axis=0))
        negative = shifts < 0
        value = float(lambdas.sum() * (1.0 - epsilon) + shifts[negative].sum())
        supergradient = (1.0 - epsilon) - null_overlaps[:, negative].sum(axis=1)
        return _Evaluation(lambdas.copy(), value, supergradient, shifts, vectors, null_overlaps, sigma_overlaps)

    def _record(self, state: _SolverState, evaluation: _Evaluation, epsilon: float) -> None:
        state.iterations += 1
        intercept = evaluation.value - float(evaluation.supergradient @ evaluation.lambdas)
        state.planes.append((evaluation.lambdas, intercept, evaluation.supergradient))
        if state.best is None or evaluation.value > state.best.value:
            state.best = evaluation

        weights = (evaluation.shifts < 0).astype(float)
        self._add_column(state, evaluation, weights)

    def _add_column(self, state: _SolverState, evaluation: _Evaluation, weights: np.ndarray) -> None:
        vectors = evaluation.vectors
        matrix = (vectors * weights) @ vectors.conj().T
        state.columns.append(_Column(
            cost=float(weights @ evaluation.sigma_overlaps),
            overlaps=evaluation.null_overlaps @ weights,
            matrix=matrix,
        ))
        if len(state.columns) > self.max_columns:
            # keep the identity column at index 0
            del state.columns[1]

    # Primal recovery

    def _threshold_weights(self, evaluation: _Evaluation, epsilon: float) -> Optional[np.ndarray]:
        """Weights of P_- + gamma P_0, gamma making the worst constraint tight"""
        band = self.band_rel_tol * max(1.0, float(np.max(np.abs(evaluation.shifts))))
        strict = evaluation.shifts < -band
        zero = np.abs(evaluation.shifts) <= band
        accepted = evaluation.null_overlaps[:, strict].sum(axis=1)
        available = evaluation.null_overlaps[:, zero].sum(axis=1)
        target = 1.0 - epsilon

        gamma = 0.0
        for have, extra in zip(accepted, available):
            if have >= target:
                continue
            if extra <= 0:
                return None
            gamma = max(gamma, (target - have) / extra)
        if gamma > 1.0 + self.feasibility_tol:
            return None
        weights = strict.astype(float)
        weights[zero] = min(gamma, 1.0)
        return weights

    def _eigenbasis_weights(self, evaluation: _Evaluation, epsilon: float) -> Optional[np.ndarray]:
        """Best test diagonal in the eigenbasis of the residual (small LP)"""
        result = linprog(
            c=evaluation.sigma_overlaps,
            A_ub=-evaluation.null_overlaps,
            b_ub=-np.full(len(evaluation.null_overlaps), 1.0 - epsilon),
            bounds=(0.0, 1.0),
            method='highs',
        )
        if result.status != 0:
            return None
        return np.clip(result.x, 0.0, 1.0)

    def _restricted_primal(self, state: _SolverState, epsilon: float) -> Optional[np.ndarray]:
        """Mixture of the recorded tests minimizing the type-II error"""
        costs = np.array([column.cost for column in state.columns])
        overlaps = np.array([column.overlaps for column in state.columns])
        result = linprog(
            c=costs,
            A_ub=-overlaps.T,
            b_ub=-np.full(overlaps.shape[1], 1.0 - epsilon),
            A_eq=np.ones((1, len(costs))),
            b_eq=[1.0],
            bounds=(0.0, None),
            method='highs',
        )
        if result.status != 0:
            return None
        return _simplex_weights(result.x)

    def _mixture_test(self, state: _SolverState, mixing: np.ndarray) -> np.ndarray:
        matrix = np.zeros_like(state.columns[0].matrix)
        for weight, column in zip(mixing, state.columns):
            if weight > 0:
                matrix = matrix + weight * column.matrix
        return matrix

    # Dual search

    def _scalar_search(self, state, stack, sigma, epsilon, budget) -> None:
        def negated(value):
            evaluation = self._evaluate(np.array([value]), stack, sigma, epsilon)
            self._record(state, evaluation, epsilon)
            return -evaluation.value

        for endpoint in (0.0, budget):
            negated(endpoint)
        minimize_scalar(negated, bounds=(0.0, budget), method='bounded',
                        options={'xatol': 1e-13 * max(1.0, budget), 'maxiter': 500})

    def _supergradient_ascent(self, state, stack, sigma, epsilon, budget) -> None:
        k = len(stack)
        lambdas = np.full(k, 1.0 / k)
        scale = budget / (2.0 * k)
        for iteration in range(1, self.warm_start_iterations + 1):
            evaluation = self._evaluate(lambdas, stack, sigma, epsilon)
            self._record(state, evaluation, epsilon)
            norm = float(np.linalg.norm(evaluation.supergradient))
            if norm == 0.0:
                break
            step = scale / math.sqrt(iteration)
            lambdas = _project_capped_simplex(lambdas + step * evaluation.supergradient / norm, budget)

    def _cutting_plane_point(self, state: _SolverState, budget: float) -> Tuple[np.ndarray, float]:
        """Maximizer of the piecewise-linear model min_t (a_t + s_t . lambda)"""
        k = len(state.planes[0][0])
        slopes = np.array([plane[2] for plane in state.planes])
        intercepts = np.array([plane[1] for plane in state.planes])
        # variables (lambda_1..lambda_k, z): maximize z with z - s_t.lambda <= a_t
        a_ub = np.hstack([-slopes, np.ones((len(slopes), 1))])
        a_ub = np.vstack([a_ub, np.append(np.ones(k), 0.0)])
        b_ub = np.append(intercepts, budget)
        c = np.zeros(k + 1)
        c[-1] = -1.0
        result = linprog(c=c, A_ub=a_ub, b_ub=b_ub,
                         bounds=[(0.0, budget)] * k + [(None, None)], method='highs')
        if result.status != 0:
            return state.best.lambdas, math.inf
        return np.clip(result.x[:k], 0.0, None), float(-result.fun)

    # Entry point

    def solve(self, nulls: Sequence[OperatorLike], sigma_n: OperatorLike, epsilon: float) -> DualSolution:
        epsilon = _check_epsilon(epsilon)
        stack, sigma = _stack(nulls, sigma_n)
        k = len(stack)
        if k > self.max_nulls:
            raise InvalidParameterError(f"Oracle handles at most {self.max_nulls} null operators, got {k}")

        budget = 2.0 / epsilon
        state = _SolverState()
        dim = sigma.shape[0]
        identity = np.eye(dim, dtype=complex)
        state.columns.append(_Column(
            cost=float(np.trace(sigma).real),
            overlaps=np.array([float(np.trace(omega).real) for omega in stack]),
            matrix=identity,
        ))

        if k == 1:
            self._scalar_search(state, stack, sigma, epsilon, budget)
        else:
            self._supergradient_ascent(state, stack, sigma, epsilon, budget)

        for extra in (self._threshold_weights, self._eigenbasis_weights):
            weights = extra(state.best, epsilon)
            if weights is not None:
                self._add_column(state, state.best, weights)

        stalled = 0
        upper = math.inf
        mixing = self._restricted_primal(state, epsilon)
        while True:
            if mixing is not None:
                upper = float(mixing @ np.array([column.cost for column in state.columns]))
            if upper - state.best.value <= self.gap_tol or state.iterations >= self.max_iter:
                break

            point, model_value = self._cutting_plane_point(state, budget)
            if model_value - state.best.value <= self.gap_tol / 10:
                stalled += 1
                if stalled > 5:
                    logger.warning("Dual converged but primal recovery cannot close the gap")
                    break
            evaluation = self._evaluate(point, stack, sigma, epsilon)
            self._record(state, evaluation, epsilon)
            weights = self._eigenbasis_weights(evaluation, epsilon)
            if weights is not None:
                self._add_column(state, evaluation, weights)
            mixing = self._restricted_primal(state, epsilon)
            if state.iterations % 100 == 0:
                logger.debug(f"Oracle iteration {state.iterations}: dual {state.best.value:.10f}, primal {upper:.10f}")

        return self._certify(state, mixing, stack, sigma, epsilon)

    def _certify(self, state, mixing, stack, sigma, epsilon) -> DualSolution:
        if mixing is None:
            matrix = state.columns[0].matrix
        else:
            matrix = self._mixture_test(state, mixing)
        test = BinaryTest(_clip_to_unit_interval(matrix))
        alpha_worst, beta = type_errors(test, list(stack), sigma)
        feasible = alpha_worst <= epsilon + 1e-8
        gap = beta - state.best.value
        certified = feasible and gap <= self.gap_tol
        if not certified:
            logger.warning(
                f"beta_exact not certified: gap {gap:.3e}, worst type I {alpha_worst:.6f} vs eps {epsilon}"
            )
        return DualSolution(
            lambdas=state.best.lambdas,
            dual_value=state.best.value,
            primal_test=test,
            primal_value=beta,
            gap=gap,
            certified=certified,
            iterations=state.iterations,
        )


def beta_exact(nulls: Sequence[OperatorLike], sigma_n: OperatorLike, epsilon: float,
               config: NumericalConfig = DEFAULT_CONFIG) -> DualSolution:
    return NeymanPearsonOracle(config).solve(nulls, sigma_n, epsilon)


def mixture_beta(nulls, sigma_n: OperatorLike, epsilon: float,
                 config: NumericalConfig = DEFAULT_CONFIG) -> DualSolution:
    """beta at epsilon/k of the uniform mixture of the k nulls"""
    k = len(nulls)
    averaged = mixture(list(nulls), np.full(k, 1.0 / k))
    return beta_exact([averaged], sigma_n, epsilon / k, config)


def classical_np(p_list: Sequence[Sequence[float]], q: Sequence[float], epsilon: float) -> float:
    """
    Exact beta_epsilon for probability vectors. A single null is solved by
    likelihood-ratio sorting with randomization at the threshold outcome,
    several nulls by a linear program over randomized tests.
    """
    epsilon = _check_epsilon(epsilon)
    q = np.asarray(q, dtype=float)
    p_array = np.atleast_2d(np.asarray(p_list, dtype=float))
    if p_array.shape[1] != q.shape[0] or np.any(p_array < 0) or np.any(q < 0):
        raise InvalidParameterError("Probability vectors must be non-negative and share one outcome set")

    if len(p_array) > 1:
        result = linprog(c=q, A_ub=-p_array, b_ub=epsilon - p_array.sum(axis=1),
                         bounds=(0.0, 1.0), method='highs')
        return float(result.fun)

    p = p_array[0]
    needed = p.sum() - epsilon
    if needed <= 0:
        return 0.0
    support = np.nonzero(p > 0)[0]
    ratios = q[support] / p[support]
    beta = 0.0
    accepted = 0.0
    for outcome in support[np.argsort(ratios, kind='stable')]:
        if accepted + p[outcome] >= needed:
            beta += (needed - accepted) / p[outcome] * q[outcome]
            break
        accepted += p[outcome]
        beta += q[outcome]
    return float(beta)
