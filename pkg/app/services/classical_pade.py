"""
Classical Padé Service
Padé approximants from Taylor coefficients and their defining-order check
"""

import math
from typing import Optional, Union

import numpy as np

from app.core.exceptions import DegeneratePadeError, SingularMatrixError
from app.models.polynomials import Domain, Polynomial
from app.models.rational import PLAIN, RationalApproximant, TaylorSeries
from app.services.linear_algebra import perturb_matrix, solve
from app.services.logging_service import logging_service

# Taylor coefficients of Q*f - P below this magnitude count as vanished
RESIDUAL_THRESHOLD = 1e-10


def denominator_system(t: TaylorSeries, m: int, n: int):
    """Rows k = 1..m of sum_j c_{n+k-j} b_j = -c_{n+k} (b_0 = 1, c_l = 0 for l < 0)"""
    matrix = np.array([[t.coefficient(n + k - j) for j in range(1, m + 1)] for k in range(1, m + 1)])
    rhs = -np.array([t.coefficient(n + k) for k in range(1, m + 1)])
    return matrix.reshape(m, m), rhs


def numerator_from_denominator(t: TaylorSeries, b: np.ndarray, n: int) -> np.ndarray:
    """a_i = sum_{k=0..min(i, m)} b_k c_{i-k}"""
    m = len(b) - 1
    return np.array([
        sum(b[k] * t.coefficient(i - k) for k in range(min(i, m) + 1))
        for i in range(n + 1)
    ])


def pade_from_taylor(t: TaylorSeries, m: int, n: int, domain: Optional[Domain] = None,
                     matrix_noise: float = 0.0, noise_seed: int = 0) -> RationalApproximant:
    """[n/m] Padé approximant with b_0 = 1

    Args:
        t: Taylor coefficients about 0
        m: Denominator degree
        n: Numerator degree
        domain: Domain attached to the result (must map 0 to 0; defaults to [-1, 1])
        matrix_noise: Relative perturbation of the denominator system
        noise_seed: Seed of that perturbation

    Raises:
        DegeneratePadeError: the denominator system is singular
    """
    if m < 0 or n < 0:
        raise ValueError("Degrees must be nonnegative")
    if len(t) < m + n + 1:
        raise ValueError(f"Padé [{n}/{m}] needs {m + n + 1} Taylor coefficients, got {len(t)}")
    domain = domain or Domain()
    if not domain.is_unit:
        raise ValueError("Padé approximants are built in the variable x itself; use the [-1, 1] domain")

    b = np.zeros(m + 1)
    b[0] = 1.0
    condition = 1.0
    if m > 0:
        matrix, rhs = denominator_system(t, m, n)
        if np.any(rhs):
            try:
                result = solve(perturb_matrix(matrix, matrix_noise, noise_seed), rhs)
            except SingularMatrixError as e:
                raise DegeneratePadeError(
                    f"Padé approximant [{n}/{m}] does not exist or is not normal", pivot_index=e.pivot_index
                ) from e
            b[1:] = result.solution
            condition = result.condition

    a = numerator_from_denominator(t, b, n)
    logging_service.debug(f"Padé [{n}/{m}] built from {len(t)} Taylor coefficients", 'pade')
    return RationalApproximant(Polynomial(a), Polynomial(b), PLAIN, domain,
                               {'condition': condition, 'method': 'pade'})


def series_residual(t: TaylorSeries, r: RationalApproximant) -> np.ndarray:
    """Taylor coefficients of Q*f - P up to the supplied length"""
    if r.parity != PLAIN:
        r = r.to_plain()
    length = len(t)
    product = np.convolve(r.denominator.coeffs, t.coeffs)[:length]
    product = np.pad(product, (0, max(0, length - product.size)))
    numerator = r.numerator.padded(length).coeffs[:length]
    return product - numerator


def pade_residual_order(t: TaylorSeries, r: RationalApproximant,
                        threshold: float = RESIDUAL_THRESHOLD) -> Union[int, float]:
    """Index of the first Taylor coefficient of Q*f - P above the threshold

    Returns math.inf when none is found within the supplied coefficients.
    """
    residual = series_residual(t, r)
    above = np.nonzero(np.abs(residual) > threshold)[0]
    if above.size == 0:
        return math.inf
    return int(above[0])
