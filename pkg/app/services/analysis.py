"""
Analysis Service
Error curves, extremum and alternation detection, the quality factor q
and the series-acceleration comparison
"""

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from app.core.exceptions import PoleDetectedError
from app.models.rational import PLAIN, ODD, RationalApproximant
from app.models.reports import ABSOLUTE, AccelerationRecord, ApproxReport, Weight
from app.models.target import TargetFunction
from app.services.cheb_core import cheb_series_eval
from app.services.logging_service import logging_service

# |f| at or below this is treated as a zero of f for the relative error
ZERO_THRESHOLD = 1e-300

DEFAULT_CHECKPOINTS = 2000

ErrorFunction = Callable[[np.ndarray], np.ndarray]


def check_poles(r: RationalApproximant, xs: np.ndarray):
    """Raise PoleDetectedError if the denominator vanishes, touches zero or changes sign on xs"""
    _, denominator = r.parts(xs)
    scale = float(np.max(np.abs(denominator))) if denominator.size else 0.0
    # a double root touches zero without a sign change
    zeros = xs[np.abs(denominator) <= np.finfo(float).eps * scale]
    signs = np.sign(denominator)
    changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    locations = sorted(list(zeros) + [0.5 * (xs[i] + xs[i + 1]) for i in changes])
    if locations:
        raise PoleDetectedError(
            f"Denominator vanishes at {len(locations)} location(s) in [{xs[0]}, {xs[-1]}]",
            locations=locations
        )


def weighted_error(f: TargetFunction, r: RationalApproximant, weight: Weight) -> ErrorFunction:
    """x -> f(x) - R(x), or (f(x) - R(x)) / f(x); zero where f vanishes"""
    def error(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        values = f(x)
        difference = values - r.evaluate(x)
        if not weight.is_relative:
            return difference
        result = np.zeros_like(difference)
        nonzero = np.abs(values) > ZERO_THRESHOLD
        result[nonzero] = difference[nonzero] / values[nonzero]
        return result
    return error


def error_curve(f: TargetFunction, r: RationalApproximant,
                checkpoints: int = DEFAULT_CHECKPOINTS) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Grid, signed absolute error and signed relative error (nan where f = 0)"""
    xs = r.domain.grid(checkpoints)
    check_poles(r, xs)
    values = f(xs)
    difference = values - r.evaluate(xs)
    relative = np.full_like(difference, np.nan)
    nonzero = np.abs(values) > ZERO_THRESHOLD
    relative[nonzero] = difference[nonzero] / values[nonzero]
    return xs, difference, relative


def _segments(values: np.ndarray) -> List[Tuple[int, int]]:
    """Index ranges of constant sign; zeros join the running segment"""
    segments = []
    start, sign = 0, 0.0
    for i, value in enumerate(values):
        s = np.sign(value)
        if s == 0.0:
            continue
        if sign == 0.0:
            sign = s
        elif s != sign:
            segments.append((start, i - 1))
            start, sign = i, s
    segments.append((start, len(values) - 1))
    return segments


def find_extrema(error: ErrorFunction, lo: float, hi: float,
                 grid_points: int = DEFAULT_CHECKPOINTS) -> List[Tuple[float, float]]:
    """One extremum per sign-constant segment of the error on a uniform grid

    The grid maximum of each segment is refined by bounded scalar
    minimisation of -|error| between its grid neighbours.
    """
    xs = np.linspace(lo, hi, max(int(grid_points), 3))
    values = error(xs)
    tolerance = 1e-12 * (hi - lo)
    extrema = []
    for first, last in _segments(values):
        k = first + int(np.argmax(np.abs(values[first:last + 1])))
        if values[k] == 0.0:
            continue
        best_x, best_value = xs[k], values[k]
        left, right = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
        refined = minimize_scalar(lambda x: -abs(float(error(np.array([x]))[0])),
                                  bounds=(left, right), method='bounded', options={'xatol': tolerance})
        if refined.success:
            candidate = float(error(np.array([refined.x]))[0])
            if abs(candidate) > abs(best_value) and np.sign(candidate) == np.sign(best_value):
                best_x, best_value = float(refined.x), candidate
        extrema.append((float(best_x), float(best_value)))
    return extrema


def extremum_interval(r: RationalApproximant, weight: Weight) -> Tuple[float, float]:
    """Where the alternation lives: the domain, or [0, B] for the parity forms"""
    domain = r.domain
    if r.parity == PLAIN:
        return domain.a, domain.b
    lo = 0.0
    if r.parity == ODD and weight.is_relative:
        # the relative error of an odd form has its limit at the origin
        lo = 1e-6 * domain.b
    return lo, domain.b


def required_extrema(r: RationalApproximant) -> int:
    m, n = r.degrees
    return m + n + 2


def alternation_quality(values: Sequence[float], required: Optional[int] = None) -> Tuple[bool, Optional[float]]:
    """Alternation test and quality factor q of extremal error values

    Looks for `required` consecutive nonzero values of alternating sign
    (all of them when required is None). Among such windows the one with
    the largest smallest magnitude is used; q is that magnitude over the
    largest magnitude of all values.
    """
    values = np.asarray(values, dtype=float).reshape(-1)
    required = len(values) if required is None else required
    if required < 1 or values.size < required:
        return False, None

    best = None
    run_start = 0
    for i in range(values.size + 1):
        ends = (i == values.size or values[i] == 0.0
                or (i > run_start and np.sign(values[i]) == np.sign(values[i - 1])))
        if not ends:
            continue
        run = np.abs(values[run_start:i])
        for j in range(0, run.size - required + 1):
            smallest = float(np.min(run[j:j + required]))
            if best is None or smallest > best:
                best = smallest
        run_start = i + 1 if i < values.size and values[i] == 0.0 else i

    largest = float(np.max(np.abs(values)))
    if best is None or largest == 0.0:
        return False, None
    return True, best / largest


def error_report(f: TargetFunction, r: RationalApproximant, w: Optional[Weight] = None,
                 checkpoints: int = DEFAULT_CHECKPOINTS) -> ApproxReport:
    """Absolute and relative errors, weighted extrema, alternation and q

    Raises:
        PoleDetectedError: the denominator vanishes on the checkpoint grid
    """
    w = w or Weight(ABSOLUTE)
    xs, difference, relative = error_curve(f, r, checkpoints)
    abs_error = float(np.max(np.abs(difference)))
    included = ~np.isnan(relative)
    excluded = int(np.count_nonzero(~included))
    rel_error = float(np.max(np.abs(relative[included]))) if np.any(included) else None
    if excluded:
        logging_service.debug(f"{excluded} checkpoint(s) excluded from the relative error of {f.name}", 'analysis')

    extrema: List[Tuple[float, float]] = []
    alternation, q, lower_bound = False, None, None
    if not (w.is_relative and rel_error is None):
        lo, hi = extremum_interval(r, w)
        extrema = find_extrema(weighted_error(f, r, w), lo, hi, checkpoints)
        alternation, q = alternation_quality([v for _, v in extrema], required_extrema(r))
        if alternation:
            lower_bound = q * (rel_error if w.is_relative else abs_error)

    return ApproxReport(
        abs_error=abs_error,
        rel_error=rel_error,
        extrema=extrema,
        alternation=alternation,
        q=q,
        lower_bound=lower_bound,
        weight=w.kind,
        checkpoints=int(xs.size),
        excluded_points=excluded,
        condition=r.condition
    )


def acceleration_compare(f: TargetFunction, m: int, n: int, parity: Optional[str] = None,
                         checkpoints: int = DEFAULT_CHECKPOINTS, s: int = 128) -> AccelerationRecord:
    """Partial Chebyshev sum of degree n+2m against the cross-multiplied approximant

    Both use the same Fourier–Chebyshev coefficients c_0..c_{n+2m} (plain degrees).
    """
    from app.services.pade_chebyshev import build_linear_cross, series_input

    parity = parity or f.parity_hint or PLAIN
    series = series_input(f, m, n, parity, s)
    xs = f.domain.grid(checkpoints)
    poly_error = float(np.max(np.abs(f(xs) - cheb_series_eval(series, f.domain.to_unit(xs)))))

    r = build_linear_cross(series, m, n, parity, f.domain)
    rational_error = error_report(f, r, Weight(ABSOLUTE), checkpoints).abs_error
    logging_service.info(
        f"Acceleration {f.name} m={m} n={n} {parity}: polynomial {poly_error:.3e}, rational {rational_error:.3e}",
        'analysis'
    )
    return AccelerationRecord(poly_error=poly_error, rational_error=rational_error, poly_degree=series.degree)
