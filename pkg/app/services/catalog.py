"""
Function Catalog Service
Built-in target functions and adapters for coefficient-defined targets
"""

import math
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from app.models.polynomials import ChebSeries, Domain, Polynomial
from app.models.rational import TaylorSeries
from app.models.target import SOURCE_CHEBYSHEV, SOURCE_TAYLOR, TargetFunction
from app.services.cheb_core import cheb_series_eval


def _series(generator: Callable[[int], float], scale: float = 1.0) -> Callable[[int], TaylorSeries]:
    def taylor(terms: int) -> TaylorSeries:
        return TaylorSeries([generator(i) * scale ** i for i in range(terms)])
    return taylor


def _exp_term(i: int) -> float:
    return 1.0 / math.factorial(i)


def _sin_term(i: int) -> float:
    if i % 2 == 0:
        return 0.0
    return (-1.0) ** ((i - 1) // 2) / math.factorial(i)


def _cos_term(i: int) -> float:
    if i % 2:
        return 0.0
    return (-1.0) ** (i // 2) / math.factorial(i)


def _atan_term(i: int) -> float:
    if i % 2 == 0:
        return 0.0
    return (-1.0) ** ((i - 1) // 2) / i


def _asin_term(i: int) -> float:
    if i % 2 == 0:
        return 0.0
    k = (i - 1) // 2
    # (2k)! / (4^k (k!)^2 (2k+1))
    ratio = 1.0
    for j in range(1, k + 1):
        ratio *= (2 * j - 1) / (2 * j)
    return ratio / i


def tan_taylor(terms: int, scale: float = 1.0) -> TaylorSeries:
    """Taylor coefficients of tan(scale*x) from tan' = 1 + tan^2"""
    coeffs = np.zeros(max(terms, 1))
    for k in range(terms - 1):
        convolution = sum(coeffs[i] * coeffs[k - i] for i in range(k + 1))
        coeffs[k + 1] = ((1.0 if k == 0 else 0.0) + convolution) / (k + 1)
    return TaylorSeries(coeffs[:terms] * scale ** np.arange(terms))


def _scaled_parameter(name: str, k: Optional[float], default: float) -> float:
    value = default if k is None else float(k)
    if value == 0.0 or not np.isfinite(value):
        raise ValueError(f"{name} needs a finite nonzero divisor k")
    return value


def builtin(name: str, k: Optional[float] = None, domain: Optional[Domain] = None) -> TargetFunction:
    """Look up a catalog function

    Args:
        name: Catalog name (see list_functions)
        k: Divisor for the scaled functions, f(pi*x/k)
        domain: Override of the default domain

    Raises:
        ValueError: unknown name or invalid parameter
    """
    ln10 = math.log(10.0)
    if name == 'sqrt':
        target = TargetFunction('sqrt', np.sqrt, Domain(0.5, 1.0))
    elif name == 'exp':
        target = TargetFunction('exp', np.exp, Domain(), taylor_generator=_series(_exp_term))
    elif name == 'exp10':
        target = TargetFunction('exp10', lambda x: np.power(10.0, x), Domain(),
                                taylor_generator=_series(_exp_term, ln10))
    elif name == 'ln':
        target = TargetFunction('ln', np.log, Domain(0.5, 1.0))
    elif name == 'lg':
        target = TargetFunction('lg', np.log10, Domain(0.5, 1.0))
    elif name == 'sin':
        target = TargetFunction('sin', np.sin, Domain(), 'odd', derivative_at_zero=1.0,
                                taylor_generator=_series(_sin_term))
    elif name == 'cos':
        target = TargetFunction('cos', np.cos, Domain(), 'even', taylor_generator=_series(_cos_term))
    elif name == 'tan':
        target = TargetFunction('tan', np.tan, Domain(-math.pi / 4, math.pi / 4), 'odd',
                                derivative_at_zero=1.0, taylor_generator=tan_taylor)
    elif name == 'atan':
        target = TargetFunction('atan', np.arctan, Domain(), 'odd', derivative_at_zero=1.0,
                                taylor_generator=_series(_atan_term))
    elif name == 'asin':
        target = TargetFunction('asin', np.arcsin, Domain(-0.5, 0.5), 'odd', derivative_at_zero=1.0,
                                taylor_generator=_series(_asin_term))
    elif name == 'sin-scaled':
        divisor = _scaled_parameter(name, k, 2.0)
        scale = math.pi / divisor
        target = TargetFunction(f'sin(pi*x/{divisor:g})', lambda x: np.sin(scale * x), Domain(), 'odd',
                                derivative_at_zero=scale, taylor_generator=_series(_sin_term, scale),
                                parameters={'k': divisor})
    elif name == 'cos-scaled':
        divisor = _scaled_parameter(name, k, 4.0)
        scale = math.pi / divisor
        target = TargetFunction(f'cos(pi*x/{divisor:g})', lambda x: np.cos(scale * x), Domain(), 'even',
                                taylor_generator=_series(_cos_term, scale), parameters={'k': divisor})
    elif name == 'tan-scaled':
        divisor = _scaled_parameter(name, k, 4.0)
        scale = math.pi / divisor
        target = TargetFunction(f'tan(pi*x/{divisor:g})', lambda x: np.tan(scale * x), Domain(), 'odd',
                                derivative_at_zero=scale,
                                taylor_generator=lambda terms: tan_taylor(terms, scale),
                                parameters={'k': divisor})
    else:
        raise ValueError(f"Unknown built-in function '{name}'. Available: {', '.join(CATALOG)}")

    if domain is not None:
        target = target.with_domain(domain)
    return target


CATALOG: Dict[str, str] = {
    'sqrt': 'square root, default domain [1/2, 1]',
    'exp': 'e^x, default domain [-1, 1]',
    'exp10': '10^x, default domain [-1, 1]',
    'ln': 'natural logarithm, default domain [1/2, 1]',
    'lg': 'decimal logarithm, default domain [1/2, 1]',
    'sin': 'sine, odd, default domain [-1, 1]',
    'cos': 'cosine, even, default domain [-1, 1]',
    'tan': 'tangent, odd, default domain [-pi/4, pi/4]',
    'atan': 'arctangent, odd, default domain [-1, 1]',
    'asin': 'arcsine, odd, default domain [-1/2, 1/2]',
    'sin-scaled': 'sin(pi*x/k), odd, k defaults to 2, domain [-1, 1]',
    'cos-scaled': 'cos(pi*x/k), even, k defaults to 4, domain [-1, 1]',
    'tan-scaled': 'tan(pi*x/k), odd, k defaults to 4, domain [-1, 1]'
}


def list_functions() -> List[Dict[str, Any]]:
    """Describe every catalog entry"""
    entries = []
    for name, description in CATALOG.items():
        target = builtin(name)
        entries.append({
            'name': name,
            'description': description,
            'domain': target.domain.to_dict(),
            'parity_hint': target.parity_hint,
            'has_taylor': target.taylor_generator is not None
        })
    return entries


def from_taylor(coeffs: Sequence[float], domain: Optional[Domain] = None,
                name: str = 'taylor') -> TargetFunction:
    """Target given by a (truncated) Taylor series about 0"""
    series = TaylorSeries(coeffs)
    if len(series) == 0:
        raise ValueError("Taylor coefficient list is empty")
    polynomial = series.as_polynomial()

    def taylor(terms: int) -> TaylorSeries:
        return series.truncated(terms)

    return TargetFunction(name, polynomial.evaluate, domain or Domain(), source=SOURCE_TAYLOR,
                          derivative_at_zero=series.coefficient(1), taylor_generator=taylor)


def from_chebyshev(coeffs: Sequence[float], domain: Optional[Domain] = None,
                   name: str = 'chebyshev') -> TargetFunction:
    """Target given by plain-convention Chebyshev coefficients on its domain"""
    series = ChebSeries(coeffs)
    if series.degree < 0:
        raise ValueError("Chebyshev coefficient list is empty")
    domain = domain or Domain()
    target_domain = domain

    def evaluate(x: np.ndarray) -> np.ndarray:
        return cheb_series_eval(series, target_domain.to_unit(x))

    return TargetFunction(name, evaluate, domain, source=SOURCE_CHEBYSHEV,
                          parameters={'series': [float(c) for c in series.coeffs]})


def polynomial_target(p: Polynomial, domain: Optional[Domain] = None, name: str = 'polynomial') -> TargetFunction:
    """Polynomial in x as a target; its Taylor series is the polynomial itself"""
    return from_taylor(p.coeffs, domain, name)
