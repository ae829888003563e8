"""
Hermitian operator core - eigendecomposition, matrix functions on the support,
trace norm, tensor powers and seeded random states
"""

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Optional, Sequence, Union
import logging

import numpy as np

from .config import DEFAULT_CONFIG, NumericalConfig
from .errors import (
    InvalidParameterError,
    MemoryCapExceeded,
    NotAStateError,
    NotHermitianError,
    NotPositiveError,
)

logger = logging.getLogger(__name__)


def _max_asymmetry(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - matrix.conj().T)))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """
    Dense complex Hermitian matrix. The stored array is the symmetrized,
    read-only copy of the input.
    """
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidParameterError(f"Expected a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidParameterError("Matrix has non-finite entries")

        tolerance = DEFAULT_CONFIG.hermitian_tol * float(np.max(np.abs(m)))
        asymmetry = _max_asymmetry(m)
        if asymmetry > tolerance:
            raise NotHermitianError(asymmetry, tolerance)

        m = (m + m.conj().T) / 2
        m.flags.writeable = False
        object.__setattr__(self, 'matrix', m)

    @classmethod
    def from_product(cls, matrix: np.ndarray) -> "HermitianOperator":
        """Wrap a matrix that is Hermitian up to rounding (products like S A S)"""
        m = np.asarray(matrix, dtype=complex)
        return cls((m + m.conj().T) / 2)

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "HermitianOperator":
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def identity(cls, dim: int) -> "HermitianOperator":
        return cls(np.eye(dim))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def operator_norm(self) -> float:
        values = eigenvalues(self)
        return float(max(abs(values[0]), abs(values[-1])))

    def kron(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(np.kron(self.matrix, as_operator(other).matrix))

    def __add__(self, other):
        return HermitianOperator(self.matrix + as_operator(other).matrix)

    def __sub__(self, other):
        return HermitianOperator(self.matrix - as_operator(other).matrix)

    def __mul__(self, scalar: float):
        return HermitianOperator(self.matrix * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return HermitianOperator(-self.matrix)

    def allclose(self, other, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.matrix, as_operator(other).matrix, atol=atol, rtol=0.0))


@dataclass(frozen=True, eq=False)
class State:
    """Density operator: positive semidefinite with unit trace"""
    op: HermitianOperator

    def __post_init__(self):
        op = as_operator(self.op)
        object.__setattr__(self, 'op', op)
        values = eigenvalues(op)
        if values[0] < -DEFAULT_CONFIG.psd_clip_tol:
            raise NotPositiveError(float(values[0]), DEFAULT_CONFIG.psd_clip_tol)
        trace = op.trace()
        if abs(trace - 1.0) > DEFAULT_CONFIG.trace_tol:
            raise NotAStateError(f"State trace is {trace!r}, expected 1")

    @classmethod
    def from_matrix(cls, matrix) -> "State":
        return cls(HermitianOperator(matrix))

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "State":
        return cls(HermitianOperator.diagonal(values))

    @classmethod
    def _trusted(cls, op: HermitianOperator) -> "State":
        # Skips the eigenvalue check for operators that are states by construction
        state = object.__new__(cls)
        object.__setattr__(state, 'op', op)
        return state

    @property
    def dim(self) -> int:
        return self.op.dim

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix


OperatorLike = Union[HermitianOperator, State, np.ndarray]


def as_operator(value: OperatorLike) -> HermitianOperator:
    if isinstance(value, HermitianOperator):
        return value
    if isinstance(value, State):
        return value.op
    return HermitianOperator(value)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: np.ndarray    # ascending
    eigenvectors: np.ndarray   # orthonormal columns

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T

    def apply(self, values: np.ndarray, mask: Optional[np.ndarray] = None) -> HermitianOperator:
        """Operator with the given spectrum on the (masked) eigenvectors"""
        vectors = self.eigenvectors if mask is None else self.eigenvectors[:, mask]
        return HermitianOperator.from_product((vectors * values) @ vectors.conj().T)


def _jacobi_eigh(matrix: np.ndarray, tol: float, max_sweeps: int):
    """
    Cyclic Jacobi rotations for a complex Hermitian matrix. Each rotation first
    removes the phase of a[p, q], then applies the real symmetric rotation.
    """
    a = np.array(matrix, dtype=complex)
    dim = a.shape[0]
    v = np.eye(dim, dtype=complex)
    norm = float(np.linalg.norm(a))
    skip = tol * norm / max(dim, 1)

    for sweep in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol * norm:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude <= skip:
                    continue
                phase = np.conj(apq / magnitude)
                theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s], [-s * phase, c * phase]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    else:
        logger.warning(f"Jacobi did not converge in {max_sweeps} sweeps (dim {dim})")

    values = np.diag(a).real
    order = np.argsort(values, kind='stable')
    return values[order], v[:, order]


def eig(A: OperatorLike, method: Optional[str] = None,
        config: NumericalConfig = DEFAULT_CONFIG) -> EigenDecomposition:
    """Eigendecomposition with ascending eigenvalues"""
    op = as_operator(A)
    method = method or config.eig_method
    if method == 'jacobi':
        values, vectors = _jacobi_eigh(op.matrix, config.jacobi_tol, config.jacobi_max_sweeps)
    elif method == 'lapack':
        values, vectors = np.linalg.eigh(op.matrix)
    else:
        raise InvalidParameterError(f"Unknown eigen method '{method}'")
    return EigenDecomposition(eigenvalues=np.asarray(values, dtype=float), eigenvectors=vectors)


def eigenvalues(A: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> np.ndarray:
    op = as_operator(A)
    if config.eig_method == 'lapack':
        return np.linalg.eigvalsh(op.matrix)
    return eig(op, config=config).eigenvalues


def _psd_spectrum(A: OperatorLike, config: NumericalConfig):
    """Clipped spectrum of a PSD operator and the mask of its support"""
    decomposition = eig(A, config=config)
    values = decomposition.eigenvalues
    scale = max(1.0, float(values[-1]))
    if values[0] < -config.psd_clip_tol * scale:
        raise NotPositiveError(float(values[0]), config.psd_clip_tol * scale)
    values = np.clip(values, 0.0, None)
    cutoff = len(values) * config.support_rel_tol * float(values[-1])
    return decomposition, values, values > cutoff


def _function_on_support(A: OperatorLike, func: Callable[[np.ndarray], np.ndarray],
                         config: NumericalConfig) -> HermitianOperator:
    decomposition, values, support = _psd_spectrum(A, config)
    return decomposition.apply(func(values[support]), support)


def power_on_support(A: OperatorLike, alpha: float,
                     config: NumericalConfig = DEFAULT_CONFIG) -> HermitianOperator:
    """
    A^alpha := sum_i lambda_i^alpha P_i over the strictly positive eigenvalues.
    alpha = 0 gives the projection onto the support.
    """
    return _function_on_support(A, lambda values: values ** float(alpha), config)


def support_projector(A: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> HermitianOperator:
    return power_on_support(A, 0.0, config)


def log_on_support(A: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> HermitianOperator:
    return _function_on_support(A, np.log, config)


def trace_power(A: OperatorLike, alpha: float, config: NumericalConfig = DEFAULT_CONFIG) -> float:
    """Tr A^alpha without building the operator"""
    _, values, support = _psd_spectrum(A, config)
    return float(np.sum(values[support] ** float(alpha)))


def support_values(A: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Strictly positive eigenvalues of a PSD operator"""
    _, values, support = _psd_spectrum(A, config)
    return values[support]


def negative_part_trace(A: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> float:
    values = eigenvalues(A, config)
    return float(np.sum(np.clip(-values, 0.0, None)))


def trace_norm(A: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> float:
    return float(np.sum(np.abs(eigenvalues(A, config))))


def kron_power(A: OperatorLike, n: int, cap: Optional[int] = None,
               config: NumericalConfig = DEFAULT_CONFIG):
    """n-fold tensor power; a State stays a State"""
    if n < 1:
        raise InvalidParameterError(f"Tensor power needs n >= 1, got {n}")
    op = as_operator(A)
    cap = config.memory_cap if cap is None else cap
    target = op.dim ** n
    if target > cap:
        raise MemoryCapExceeded(target, cap)

    if n == 1:
        return A if isinstance(A, (State, HermitianOperator)) else op
    power = HermitianOperator(reduce(np.kron, [op.matrix] * n))
    if isinstance(A, State):
        return State._trusted(power)
    return power


def support_leq(A: OperatorLike, B: OperatorLike, config: NumericalConfig = DEFAULT_CONFIG) -> bool:
    """supp A subseteq supp B, tested as ||(I - B^0) A (I - B^0)|| <= tol"""
    a = as_operator(A)
    complement = np.eye(a.dim) - support_projector(B, config).matrix
    outside = HermitianOperator.from_product(complement @ a.matrix @ complement)
    values = eigenvalues(outside, config)
    leak = float(max(abs(values[0]), abs(values[-1])))
    return leak <= config.support_check_tol * max(1.0, a.operator_norm())


def mixture(states: Sequence[State], weights: Sequence[float]) -> State:
    weights = np.asarray(weights, dtype=float)
    if len(states) != len(weights) or np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise InvalidParameterError("Mixture weights must be a probability vector matching the states")
    total = sum(w * s.matrix for w, s in zip(weights, states))
    return State._trusted(HermitianOperator.from_product(total))


# Seeded instance generation

def random_state(dim: int, seed: int) -> State:
    """Full-rank state G G^dagger / Tr G G^dagger for a seeded complex Gaussian G"""
    if dim < 1:
        raise InvalidParameterError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return State(HermitianOperator.from_product(m / np.trace(m).real))


def random_diagonal_state(dim: int, seed: int) -> State:
    rng = np.random.default_rng(seed)
    return State.diagonal(rng.dirichlet(np.ones(dim)))


def random_pure_state(dim: int, seed: int) -> State:
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    psi /= np.linalg.norm(psi)
    return State(HermitianOperator.from_product(np.outer(psi, psi.conj())))


def maximally_mixed(dim: int) -> State:
    return State(HermitianOperator(np.eye(dim) / dim))


def rotated_state(state: State, angle: float) -> State:
    """Qubit state conjugated by the real plane rotation of the given angle"""
    if state.dim != 2:
        raise InvalidParameterError("rotated_state is defined for qubit states")
    c, s = math.cos(angle), math.sin(angle)
    rotation = np.array([[c, -s], [s, c]])
    return State(HermitianOperator.from_product(rotation @ state.matrix @ rotation.T))
