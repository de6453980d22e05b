"""
Elementary Functions Service
Argument reduction onto the fixed odd rational kernels, the Jacobi-fraction
form of the kernels and an accuracy harness against a high-precision reference
"""

import math
from typing import Callable, Dict, Optional, Tuple, Union

import mpmath
import numpy as np

from app.core.exceptions import (
    ConversionError, ElemfunDomainError, ElemfunOverflowError, PoleDetectedError
)
from app.models.kernels import ENHANCED, ORDINARY, JacobiCoeffs, KernelCoeffs, check_precision
from app.models.reports import HarnessRecord
from app.services.logging_service import logging_service
from app.utils.coefficient_files import load_kernel_table

FUNCTION_IDS = ('lg', 'exp10', 'ln', 'exp', 'pow', 'sin', 'cos', 'tan', 'atan', 'asin')

KERNEL_OF = {
    'lg': 'lg', 'ln': 'lg',
    'exp10': 'exp10', 'exp': 'exp10', 'pow': 'exp10',
    'sin': 'sin', 'cos': 'sin',
    'tan': 'tan',
    'atan': 'atan',
    'asin': 'asin'
}

KERNEL_FORMS = ('kernel', 'jacobi')

SQRT10 = math.sqrt(10.0)
INV_SQRT10 = SQRT10 / 10.0
LN10 = math.log(10.0)
LG_E = 1.0 / LN10
TAN_PI_8 = math.sqrt(2.0) - 1.0

HARNESS_INTERVALS: Dict[str, Tuple[float, float]] = {
    'lg': (0.1, 1.0),
    'ln': (0.1, 1.0),
    'exp10': (-1.0, 1.0),
    'exp': (-1.0, 1.0),
    'sin': (-math.pi / 2, math.pi / 2),
    'cos': (-math.pi / 4, math.pi / 4),
    'tan': (-math.pi / 4, math.pi / 4),
    'atan': (-TAN_PI_8, TAN_PI_8),
    'asin': (-0.5, 0.5)
}

# Reduction intervals |y| <= bound of each kernel
KERNEL_INTERVALS: Dict[str, float] = {
    'lg': (SQRT10 - 1.0) / (SQRT10 + 1.0),
    'exp10': 1.0,
    'sin': math.pi / 2,
    'tan': math.pi / 4,
    'atan': TAN_PI_8,
    'asin': 0.5
}

REFERENCE_DPS = 30

Number = Union[float, np.ndarray]


def eval_kernel(k: KernelCoeffs, y: Number) -> Number:
    """Nested evaluation y (a + s (b + c s)) / (alpha + s (beta + s)), s = y^2 (and the enhanced analogue)"""
    y = np.asarray(y, dtype=float)
    s = y * y
    if k.precision == ORDINARY:
        numerator = k['a'] + s * (k['b'] + k['c'] * s)
        denominator = k['alpha'] + s * (k['beta'] + s)
    else:
        numerator = k['a'] + s * (k['b'] + s * (k['c'] + k['d'] * s))
        denominator = k['alpha'] + s * (k['beta'] + s * (k['gamma'] + s))
    if np.any(denominator == 0.0):
        raise PoleDetectedError(f"Kernel {k.function}/{k.precision} denominator vanishes",
                                locations=list(np.atleast_1d(y)[np.atleast_1d(denominator) == 0.0]))
    result = y * numerator / denominator
    return float(result) if result.ndim == 0 else result


def eval_jacobi(j: JacobiCoeffs, y: Number) -> Number:
    """Continued-fraction evaluation of the kernel"""
    y = np.asarray(y, dtype=float)
    s = y * y
    with np.errstate(divide='raise', invalid='raise'):
        try:
            tail = s + j['nu'] + j['ae'] / (s + j['lam'])
            if j.precision == ORDINARY:
                result = y * (j['c'] + j['mu'] / tail)
            else:
                result = y * (j['d'] + j['xi'] / (s + j['eta'] + j['mu'] / tail))
        except FloatingPointError as e:
            raise PoleDetectedError(f"Jacobi fraction {j.function}/{j.precision} breaks down",
                                    locations=[]) from e
    return float(result) if result.ndim == 0 else result


def to_jacobi(k: KernelCoeffs) -> JacobiCoeffs:
    """Rewrite a kernel as a Jacobi fraction by successive division in s = y^2

    Raises:
        ConversionError: an intermediate leading coefficient vanishes
    """
    def divide(numerator: float, denominator: float, what: str) -> float:
        if denominator == 0.0:
            raise ConversionError(f"Jacobi conversion of {k.function}/{k.precision} breaks down at {what}")
        return numerator / denominator

    if k.precision == ORDINARY:
        c = k['c']
        mu = k['b'] - c * k['beta']
        lam = divide(k['a'] - c * k['alpha'], mu, 'mu')
        nu = k['beta'] - lam
        ae = k['alpha'] - lam * nu
        return JacobiCoeffs(k.function, k.precision, {'c': c, 'mu': mu, 'lam': lam, 'nu': nu, 'ae': ae})

    d = k['d']
    xi = k['c'] - d * k['gamma']
    p = divide(k['b'] - d * k['beta'], xi, 'xi')
    q = divide(k['a'] - d * k['alpha'], xi, 'xi')
    eta = k['gamma'] - p
    mu = k['beta'] - q - eta * p
    lam = divide(k['alpha'] - eta * q, mu, 'mu')
    nu = p - lam
    ae = q - lam * nu
    return JacobiCoeffs(k.function, k.precision,
                        {'d': d, 'xi': xi, 'eta': eta, 'mu': mu, 'lam': lam, 'nu': nu, 'ae': ae})


def kernel_coefficients(kernel: str, precision: str = ORDINARY) -> Tuple[KernelCoeffs, JacobiCoeffs]:
    """Published kernel and Jacobi coefficients"""
    check_precision(precision)
    table = load_kernel_table()
    if (kernel, precision) not in table:
        raise ValueError(f"No coefficients for kernel '{kernel}' ({precision})")
    return table[(kernel, precision)]


def _kernel(function: str, precision: str, form: str) -> Callable[[float], float]:
    if form not in KERNEL_FORMS:
        raise ValueError(f"Unknown kernel form '{form}', expected kernel or jacobi")
    kernel, jacobi = kernel_coefficients(KERNEL_OF[function], precision)
    if form == 'jacobi':
        return lambda y: eval_jacobi(jacobi, y)
    return lambda y: eval_kernel(kernel, y)


def _shift_decimal(x: float, p: int) -> float:
    """x / 10^p; near the ends of the double range 10^p itself does not exist, so it goes in two steps"""
    if abs(p) <= 300:
        return x / 10.0 ** p
    half = p // 2
    return x / 10.0 ** half / 10.0 ** (p - half)


def _lg(x: float, r: Callable[[float], float]) -> float:
    if not x > 0.0 or math.isinf(x):
        raise ElemfunDomainError(f"lg needs a positive finite argument, got {x!r}", x=x)
    # x = x0 * 10^p with 0.1 <= x0 < 1
    p = math.floor(math.log10(x)) + 1
    x0 = _shift_decimal(x, p)
    if x0 < 0.1:
        p -= 1
        x0 = _shift_decimal(x, p)
    elif x0 >= 1.0:
        p += 1
        x0 = _shift_decimal(x, p)
    # exact powers of ten, from either side of the split
    tolerance = 4 * np.finfo(float).eps
    if abs(x0 - 0.1) <= tolerance * 0.1:
        return float(p - 1)
    if abs(x0 - 1.0) <= tolerance:
        return float(p)
    y = (x0 - INV_SQRT10) / (x0 + INV_SQRT10)
    return p - 0.5 + r(y)


def _exp10(x: float, r: Callable[[float], float]) -> float:
    if math.isnan(x):
        raise ElemfunDomainError("10^x of NaN", x=x)
    p = math.trunc(x)
    y = x - p
    ratio = r(y)
    try:
        result = 10.0 ** p * (1.0 + ratio) / (1.0 - ratio)
    except OverflowError as e:
        raise ElemfunOverflowError(f"10^{x!r} overflows", x=x) from e
    if math.isinf(result):
        raise ElemfunOverflowError(f"10^{x!r} overflows", x=x)
    return result


def _sin(x: float, r: Callable[[float], float]) -> float:
    if math.isinf(x) or math.isnan(x):
        raise ElemfunDomainError(f"sin needs a finite argument, got {x!r}", x=x)
    if x < 0.0:
        return -_sin(-x, r)
    two_pi = 2.0 * math.pi
    y = math.modf(x / two_pi)[0] * two_pi
    if y <= math.pi / 2:
        return r(y)
    if y <= 1.5 * math.pi:
        return r(math.pi - y)
    return r(y - two_pi)


def _tan(x: float, r: Callable[[float], float]) -> float:
    if math.isinf(x) or math.isnan(x):
        raise ElemfunDomainError(f"tan needs a finite argument, got {x!r}", x=x)
    if x < 0.0:
        return -_tan(-x, r)
    y = math.modf(x / math.pi)[0] * math.pi
    if y <= math.pi / 4:
        return r(y)
    if y <= 0.75 * math.pi:
        value = r(math.pi / 2 - y)
        if value == 0.0:
            raise ElemfunDomainError(f"tan has a pole at {x!r}", x=x)
        return 1.0 / value
    return r(y - math.pi)


def _atan(x: float, r: Callable[[float], float]) -> float:
    if math.isnan(x):
        raise ElemfunDomainError("atan of NaN", x=x)
    if x < 0.0:
        return -_atan(-x, r)
    if x < TAN_PI_8:
        return r(x)
    if x <= 1.0:
        return math.pi / 4 - r((1.0 - x) / (1.0 + x))
    # 1/x may still exceed tan(pi/8), so it is reduced again
    return math.pi / 2 - _atan(1.0 / x, r)


def _asin(x: float, r: Callable[[float], float]) -> float:
    if math.isnan(x) or abs(x) > 1.0:
        raise ElemfunDomainError(f"asin needs |x| <= 1, got {x!r}", x=x)
    if x < 0.0:
        return -_asin(-x, r)
    if x <= 0.5:
        return r(x)
    return math.pi / 2 - 2.0 * r(math.sqrt((1.0 - x) / 2.0))


def evaluate(function: str, x: float, precision: str = ORDINARY, form: str = 'kernel',
             exponent: Optional[float] = None) -> float:
    """Elementary function value through argument reduction and the rational kernel

    Args:
        function: One of FUNCTION_IDS
        x: Argument (the base for pow)
        precision: ordinary or enhanced
        form: kernel (nested fraction) or jacobi (continued fraction)
        exponent: The exponent y of pow(x, y)

    Raises:
        ElemfunDomainError: argument outside the function's domain
        ElemfunOverflowError: result exceeds the floating-point range
    """
    if function not in FUNCTION_IDS:
        raise ValueError(f"Unknown function '{function}', expected one of {', '.join(FUNCTION_IDS)}")
    check_precision(precision)
    r = _kernel(function, precision, form)
    x = float(x)

    if function == 'lg':
        return _lg(x, r)
    if function == 'ln':
        return LN10 * _lg(x, r)
    if function == 'exp10':
        return _exp10(x, r)
    if function == 'exp':
        return _exp10(x * LG_E, r)
    if function == 'pow':
        if exponent is None:
            raise ValueError("pow needs an exponent")
        if not x > 0.0:
            raise ElemfunDomainError(f"pow needs a positive base, got {x!r}", x=x)
        return _exp10(float(exponent) * _lg(x, r), r)
    if function == 'sin':
        return _sin(x, r)
    if function == 'cos':
        return _sin(math.pi / 2 - abs(x), r)
    if function == 'tan':
        return _tan(x, r)
    if function == 'atan':
        return _atan(x, r)
    return _asin(x, r)


def power(base: float, exponent: float, precision: str = ORDINARY, form: str = 'kernel') -> float:
    return evaluate('pow', base, precision, form, exponent=exponent)


def reference(function: str, x: float) -> mpmath.mpf:
    """High-precision value of the function at the exact binary value of x"""
    with mpmath.workdps(REFERENCE_DPS):
        value = mpmath.mpf(x)
        if function == 'lg':
            return mpmath.log10(value)
        if function == 'ln':
            return mpmath.log(value)
        if function == 'exp10':
            return mpmath.power(10, value)
        if function == 'exp':
            return mpmath.exp(value)
        if function == 'sin':
            return mpmath.sin(value)
        if function == 'cos':
            return mpmath.cos(value)
        if function == 'tan':
            return mpmath.tan(value)
        if function == 'atan':
            return mpmath.atan(value)
        if function == 'asin':
            return mpmath.asin(value)
    raise ValueError(f"No reference evaluator for '{function}'")


def accuracy_harness(function: str, precision: str = ORDINARY, grid: int = 10000,
                     form: str = 'kernel', interval: Optional[Tuple[float, float]] = None) -> HarnessRecord:
    """Maximal and mean absolute and relative errors on a uniform grid of the function's interval"""
    if function not in HARNESS_INTERVALS:
        raise ValueError(f"No accuracy interval for '{function}'")
    if grid < 1000:
        raise ValueError("The accuracy harness needs a grid of at least 1000 points")
    lo, hi = interval or HARNESS_INTERVALS[function]
    xs = np.linspace(lo, hi, int(grid))

    abs_errors = np.empty(xs.size)
    rel_errors = np.full(xs.size, np.nan)
    with mpmath.workdps(REFERENCE_DPS):
        for i, x in enumerate(xs):
            exact = reference(function, float(x))
            error = abs(mpmath.mpf(evaluate(function, float(x), precision, form)) - exact)
            abs_errors[i] = float(error)
            if exact != 0:
                rel_errors[i] = float(error / abs(exact))

    relative = rel_errors[~np.isnan(rel_errors)]
    record = HarnessRecord(
        function=function,
        precision=precision,
        interval=(float(lo), float(hi)),
        abs_error=float(np.max(abs_errors)),
        rel_error=float(np.max(relative)) if relative.size else 0.0,
        mean_abs_error=float(np.mean(abs_errors)),
        mean_rel_error=float(np.mean(relative)) if relative.size else 0.0,
        grid=int(xs.size)
    )
    logging_service.info(f"Harness {function}/{precision}: abs={record.abs_error:.3e} rel={record.rel_error:.3e}",
                         'elemfun')
    return record


__all__ = [
    'FUNCTION_IDS', 'ORDINARY', 'ENHANCED', 'evaluate', 'power', 'eval_kernel', 'eval_jacobi',
    'to_jacobi', 'kernel_coefficients', 'accuracy_harness', 'reference'
]
