"""
Operator file format - JSON document with fields dim, re, im (row-major dim x dim)
"""

import json
from pathlib import Path
from typing import Union
import logging

import numpy as np

from .errors import NotAStateError, NotHermitianError, NotPositiveError, OperatorFileError
from .hermitian import HermitianOperator, State, as_operator

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_block(document: dict, field: str, dim: int, path: str) -> np.ndarray:
    if field not in document:
        raise OperatorFileError(path, "missing field", field)
    try:
        block = np.array(document[field], dtype=float)
    except (TypeError, ValueError):
        raise OperatorFileError(path, "entries must be real numbers", field)
    if block.shape != (dim, dim):
        raise OperatorFileError(path, f"expected shape ({dim}, {dim}), got {block.shape}", field)
    return block


def load_operator(path: PathLike) -> HermitianOperator:
    """Load and validate a Hermitian operator file"""
    path = str(path)
    try:
        with open(path, encoding='utf-8') as handle:
            document = json.load(handle)
    except FileNotFoundError:
        raise OperatorFileError(path, "file not found")
    except json.JSONDecodeError as e:
        raise OperatorFileError(path, f"invalid JSON ({e.msg} at line {e.lineno})")

    if not isinstance(document, dict):
        raise OperatorFileError(path, "top level must be an object")
    dim = document.get('dim')
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise OperatorFileError(path, "must be a positive integer", 'dim')

    real = _read_block(document, 're', dim, path)
    imag = _read_block(document, 'im', dim, path)
    try:
        operator = HermitianOperator(real + 1j * imag)
    except NotHermitianError as e:
        raise OperatorFileError(path, str(e), 're/im')

    logger.debug(f"Loaded {dim}x{dim} operator from {path}")
    return operator


def load_state(path: PathLike) -> State:
    operator = load_operator(path)
    try:
        return State(operator)
    except (NotPositiveError, NotAStateError) as e:
        raise OperatorFileError(str(path), str(e))


def save_operator(path: PathLike, operator) -> None:
    """Write an operator; floats are stored with full repr precision"""
    matrix = as_operator(operator).matrix
    document = {
        'dim': int(matrix.shape[0]),
        're': matrix.real.tolist(),
        'im': matrix.imag.tolist(),
    }
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(document, handle, indent=2)
        handle.write('\n')
