"""
Chebyshev Core Service
Chebyshev polynomial evaluation, basis conversion, economization,
Gauss–Chebyshev quadrature and Fourier–Chebyshev coefficients
"""

from functools import lru_cache
from typing import Callable, Union

import numpy as np

from app.core.exceptions import DegreeCapError, EvaluationError
from app.models.polynomials import ArrayLike, ChebSeries, Polynomial
from app.models.target import TargetFunction
from app.services.logging_service import logging_service

# Basis conversions are carried out in floating point up to this degree
DEGREE_CAP = 64

DEFAULT_QUADRATURE_NODES = 128


def _check_cap(degree: int):
    if degree > DEGREE_CAP:
        raise DegreeCapError(f"Degree {degree} exceeds the conversion cap {DEGREE_CAP}",
                             degree=degree, cap=DEGREE_CAP)


def cheb_eval(n: int, x: ArrayLike) -> np.ndarray:
    """T_n(x) by the three-term recurrence T_n = 2x T_{n-1} - T_{n-2}"""
    if n < 0:
        raise ValueError("Chebyshev degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    previous, current = np.ones_like(x), x.copy()
    if n == 0:
        return previous
    for _ in range(n - 1):
        previous, current = current, 2.0 * x * current - previous
    return current


def cheb_vandermonde(x: ArrayLike, k_max: int) -> np.ndarray:
    """Matrix V[i, k] = T_k(x_i) for k = 0..k_max"""
    x = np.asarray(x, dtype=float).reshape(-1)
    table = np.empty((x.size, k_max + 1))
    table[:, 0] = 1.0
    if k_max >= 1:
        table[:, 1] = x
    for k in range(2, k_max + 1):
        table[:, k] = 2.0 * x * table[:, k - 1] - table[:, k - 2]
    return table


@lru_cache(maxsize=None)
def _monomial_table(degree: int) -> np.ndarray:
    """Row k holds the monomial coefficients of T_k"""
    table = np.zeros((degree + 1, degree + 1))
    table[0, 0] = 1.0
    if degree >= 1:
        table[1, 1] = 1.0
    for k in range(2, degree + 1):
        table[k, 1:] = 2.0 * table[k - 1, :-1]
        table[k] -= table[k - 2]
    table.setflags(write=False)
    return table


def chebyshev_monomials(k: int) -> np.ndarray:
    """Monomial coefficients of T_k"""
    _check_cap(k)
    return np.array(_monomial_table(k)[k])


def monomial_to_cheb(p: Polynomial) -> ChebSeries:
    """Rewrite a monomial polynomial as a Chebyshev series

    x^m = 2^(1-m) * sum_k C(m, k) T_{m-2k}, with the T_0 term halved.
    """
    degree = p.degree
    if degree < 0:
        return ChebSeries([])
    _check_cap(degree)

    result = np.zeros(degree + 1)
    for m, a in enumerate(p.coeffs):
        if a == 0.0:
            continue
        scale = a * 2.0 ** (1 - m)
        binomial = 1.0
        for k in range(m // 2 + 1):
            index = m - 2 * k
            term = scale * binomial
            result[index] += 0.5 * term if index == 0 else term
            binomial = binomial * (m - k) / (k + 1)
    return ChebSeries(result)


def cheb_to_monomial(s: ChebSeries) -> Polynomial:
    """Expand a Chebyshev series in powers of x"""
    degree = s.degree
    if degree < 0:
        return Polynomial([])
    _check_cap(degree)
    return Polynomial(np.asarray(s.coeffs) @ _monomial_table(degree))


def economize(p: Polynomial, target_degree: int) -> Polynomial:
    """Lower the degree by successively subtracting a_n * 2^(1-n) T_n"""
    if target_degree < 0:
        raise ValueError("target_degree must be nonnegative")
    if target_degree > p.degree:
        raise ValueError(f"target_degree {target_degree} exceeds degree {p.degree}")
    _check_cap(p.degree)

    coeffs = np.array(p.coeffs, dtype=float)
    for degree in range(p.degree, target_degree, -1):
        leading = coeffs[degree]
        if leading != 0.0:
            coeffs[:degree + 1] -= leading * 2.0 ** (1 - degree) * _monomial_table(p.degree)[degree, :degree + 1]
        coeffs[degree] = 0.0
    return Polynomial(coeffs[:target_degree + 1])


def gauss_cheb_nodes(s: int) -> np.ndarray:
    """Nodes cos((2i-1) pi / 2s), i = 1..s"""
    if s < 1:
        raise ValueError("Quadrature needs s >= 1 nodes")
    i = np.arange(1, s + 1)
    return np.cos((2 * i - 1) * np.pi / (2 * s))


def gauss_cheb_quadrature(phi: Callable[[np.ndarray], np.ndarray], s: int = DEFAULT_QUADRATURE_NODES) -> float:
    """(pi/s) * sum phi(x_i): integral of phi(x)/sqrt(1-x^2) over (-1, 1)

    Exact for polynomial phi of degree <= 2s-1.
    """
    nodes = gauss_cheb_nodes(s)
    with np.errstate(all='ignore'):
        values = np.asarray(phi(nodes), dtype=float)
    if not np.all(np.isfinite(values)):
        raise EvaluationError("Integrand is not finite at a quadrature node", nodes=s)
    return float(np.pi / s * np.sum(values))


def fourier_cheb_coeffs(f: Union[TargetFunction, Callable[[np.ndarray], np.ndarray]],
                        k_max: int, s: int = DEFAULT_QUADRATURE_NODES) -> ChebSeries:
    """Coefficients c_0..c_k_max of f on [-1, 1] (f's own domain for a TargetFunction)

    c_0 = (1/pi) int f w, c_i = (2/pi) int f T_i w, plain-sum convention.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    nodes = gauss_cheb_nodes(s)
    if isinstance(f, TargetFunction):
        values = f.on_unit(nodes)
    else:
        with np.errstate(all='ignore'):
            values = np.asarray(f(nodes), dtype=float)
        if not np.all(np.isfinite(values)):
            raise EvaluationError("Function is not finite at a quadrature node", nodes=s)

    coeffs = (2.0 / s) * (values @ cheb_vandermonde(nodes, k_max))
    coeffs[0] *= 0.5
    return ChebSeries(coeffs)


def cheb_series_eval(s: ChebSeries, x: ArrayLike) -> np.ndarray:
    """Clenshaw backward recurrence for sum c_i T_i(x)"""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        logging_service.debug("Chebyshev series evaluated outside [-1, 1] (extrapolation)", 'cheb')

    coeffs = s.coeffs
    if len(coeffs) == 0:
        return np.zeros_like(x)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for c in coeffs[:0:-1]:
        b1, b2 = 2.0 * x * b1 - b2 + c, b1
    return x * b1 - b2 + coeffs[0]


def cheb_multiply(s1: ChebSeries, s2: ChebSeries) -> ChebSeries:
    """Product series via T_i T_j = (T_{i+j} + T_{|i-j|}) / 2"""
    if s1.degree < 0 or s2.degree < 0:
        return ChebSeries([])
    _check_cap(max(s1.degree, s2.degree))

    product = np.zeros(s1.degree + s2.degree + 1)
    half = 0.5 * np.outer(s1.coeffs, s2.coeffs)
    i, j = np.indices(half.shape)
    np.add.at(product, (i + j).ravel(), half.ravel())
    np.add.at(product, np.abs(i - j).ravel(), half.ravel())
    return ChebSeries(product)
