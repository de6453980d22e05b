"""
Linear Algebra Service
Gauss elimination with partial pivoting and the column-sum condition number
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from app.core.exceptions import ShapeError, SingularMatrixError
from app.models.reports import SolveResult

Matrix = np.ndarray

EPS = np.finfo(float).eps

# Pivots below SINGULAR_FACTOR * eps * ||A||_1 declare the matrix singular
SINGULAR_FACTOR = 1e3

# Construction systems are ill-conditioned by nature; builders only reject
# pivots that vanish at working precision
CONSTRUCTION_SINGULAR_FACTOR = 1.0


@dataclass
class LUFactorization:
    """Packed L\\U factors with the row permutation"""

    lu: np.ndarray
    permutation: np.ndarray
    norm: float
    pivot_growth: float

    @property
    def order(self) -> int:
        return self.lu.shape[0]


def as_matrix(a: Union[Matrix, Sequence[Sequence[float]]]) -> np.ndarray:
    matrix = np.array(a, dtype=float)
    if matrix.ndim != 2:
        raise ShapeError(f"Expected a 2-D matrix, got {matrix.ndim} dimension(s)")
    return matrix


def norm1(a: Union[Matrix, Sequence[float]]) -> float:
    """Column-sum norm of a matrix, or the l1 norm of a vector"""
    array = np.asarray(a, dtype=float)
    if array.ndim == 1:
        return float(np.sum(np.abs(array)))
    if array.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(array), axis=0)))


def lu_factor(a: Matrix, singular_factor: float = SINGULAR_FACTOR) -> LUFactorization:
    """Factor PA = LU with row interchanges

    Raises:
        SingularMatrixError: a pivot falls below the singularity threshold
    """
    matrix = as_matrix(a)
    n, cols = matrix.shape
    if n != cols or n == 0:
        raise ShapeError(f"Expected a nonempty square matrix, got {n}x{cols}")

    norm = norm1(matrix)
    threshold = singular_factor * EPS * norm
    lu = matrix.copy()
    permutation = np.arange(n)
    scale = np.max(np.abs(matrix)) or 1.0

    for k in range(n):
        # Row interchange, if needed
        p = int(np.argmax(np.abs(lu[k:, k]))) + k
        if abs(lu[p, k]) <= threshold:
            raise SingularMatrixError(f"Matrix is singular at pivot {k}", pivot_index=k)
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            permutation[[k, p]] = permutation[[p, k]]

        # Elimination
        if k + 1 < n:
            factors = lu[k + 1:, k] / lu[k, k]
            lu[k + 1:, k] = factors
            lu[k + 1:, k + 1:] -= np.outer(factors, lu[k, k + 1:])

    growth = float(np.max(np.abs(np.triu(lu))) / scale)
    return LUFactorization(lu, permutation, norm, growth)


def lu_solve(factor: LUFactorization, h: np.ndarray) -> np.ndarray:
    """Forward and back substitution; h may hold several right-hand sides as columns"""
    lu = factor.lu
    n = factor.order
    rhs = np.array(h, dtype=float)
    if rhs.shape[0] != n:
        raise ShapeError(f"Right-hand side has {rhs.shape[0]} rows, matrix order is {n}")
    y = rhs[factor.permutation]

    for k in range(1, n):
        y[k] -= lu[k, :k] @ y[:k]
    for k in range(n - 1, -1, -1):
        y[k] = (y[k] - lu[k, k + 1:] @ y[k + 1:]) / lu[k, k]
    return y


def inverse(factor: LUFactorization) -> np.ndarray:
    return lu_solve(factor, np.eye(factor.order))


def solve(a: Matrix, h: Sequence[float], singular_factor: float = SINGULAR_FACTOR,
          with_condition: bool = True) -> SolveResult:
    """Solve A y = h by Gauss elimination with partial pivoting

    Args:
        a: Square matrix
        h: Right-hand side
        singular_factor: Pivot threshold multiplier (times eps * ||A||_1)
        with_condition: Also compute ||A|| * ||A^-1|| from the explicit inverse

    Returns:
        SolveResult with the solution, condition number and pivot growth
    """
    vector = np.asarray(h, dtype=float).reshape(-1)
    factor = lu_factor(a, singular_factor)
    if vector.size != factor.order:
        raise ShapeError(f"Right-hand side has {vector.size} entries, matrix order is {factor.order}")

    solution = lu_solve(factor, vector)
    condition = None
    if with_condition:
        condition = max(1.0, factor.norm * norm1(inverse(factor)))
    return SolveResult(solution=solution, condition=condition, pivot_growth=factor.pivot_growth)


def condition_number(a: Matrix, singular_factor: float = SINGULAR_FACTOR) -> float:
    """cond(A) = ||A||_1 * ||A^-1||_1 with the column-sum norm

    Raises:
        SingularMatrixError: when A is singular
    """
    factor = lu_factor(a, singular_factor)
    return max(1.0, factor.norm * norm1(inverse(factor)))


def perturb_matrix(matrix: Matrix, level: float, seed: int) -> np.ndarray:
    """Relative perturbation of every entry, reproducible from the seed"""
    matrix = as_matrix(matrix)
    if level <= 0.0:
        return matrix
    rng = np.random.default_rng(seed)
    return matrix * (1.0 + level * rng.uniform(-1.0, 1.0, size=matrix.shape))
