"""
Exception hierarchy for the quantum Stein toolkit
"""

from typing import Optional


class SteinError(Exception):
    """Base class for every error raised by the toolkit"""


class InvalidParameterError(SteinError, ValueError):
    """A scalar parameter (alpha, epsilon, n, delta) is outside its domain"""


class NotHermitianError(SteinError, ValueError):
    def __init__(self, max_asymmetry: float, tolerance: float):
        self.max_asymmetry = max_asymmetry
        self.tolerance = tolerance
        super().__init__(
            f"Matrix is not Hermitian: max asymmetry {max_asymmetry:.3e} exceeds {tolerance:.3e}"
        )


class NotPositiveError(SteinError, ValueError):
    def __init__(self, min_eigenvalue: float, tolerance: float):
        self.min_eigenvalue = min_eigenvalue
        self.tolerance = tolerance
        super().__init__(
            f"Operator is not positive semidefinite: eigenvalue {min_eigenvalue:.3e} below -{tolerance:.1e}"
        )


class NotAStateError(SteinError, ValueError):
    """Positive operator whose trace is not one"""


class SupportViolationError(SteinError):
    """supp rho is not contained in supp sigma where the quantity requires it"""


class MemoryCapExceeded(SteinError):
    def __init__(self, requested: int, cap: int):
        self.requested = requested
        self.cap = cap
        super().__init__(f"Tensor power of dimension {requested} exceeds memory cap {cap}")


class ScheduleInfeasibleError(SteinError):
    """The a*/sqrt(n) feasibility conditions of the upper-bound schedule fail"""


class BoundViolationError(SteinError):
    """A value that must satisfy a proven inequality does not"""


class OperatorFileError(SteinError):
    def __init__(self, path: str, message: str, field: Optional[str] = None):
        self.path = path
        self.field = field
        location = f"{path}:{field}" if field else path
        super().__init__(f"{location}: {message}")
