"""
Autocorrection Service
Error approximants dP/dQ of two constructions, the perturbation experiments
and the residual checks behind the error-compensation effect
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.exceptions import ShapeError
from app.models.polynomials import ChebSeries
from app.models.rational import PLAIN, ODD, RationalApproximant, TaylorSeries, check_parity, plain_degrees
from app.models.reports import BuildOptions, ErrorApproximant, ExperimentRecord
from app.models.target import TargetFunction
from app.services import analysis
from app.services.cheb_core import cheb_multiply, monomial_to_cheb
from app.services.classical_pade import pade_from_taylor
from app.services.linear_algebra import norm1
from app.services.logging_service import logging_service
from app.services.pade_chebyshev import (
    build_linear_cross, build_linear_integral, build_nonlinear, normalization_row, series_input,
    taylor_to_cheb_truncated
)

METHODS = ('pc-linear', 'pc-cross', 'pc-nonlinear', 'pade')

# |dQ| below this fraction of its maximum marks an excluded zone
EXCLUSION_FRACTION = 1e-3

# Denominators below this are skipped by the identity checks
DENOMINATOR_FLOOR = 1e-8

ORDER_THRESHOLD = 1e-6


@dataclass(frozen=True)
class NodeCountChange:
    """Second build uses another quadrature node count"""
    nodes: int

    def describe(self) -> str:
        return f"quadrature nodes -> {self.nodes}"


@dataclass(frozen=True)
class CoefficientNoise:
    """Relative noise on the defining system (matrix or input coefficients)"""
    level: float
    seed: int = 1

    def describe(self) -> str:
        return f"coefficient noise {self.level:g} (seed {self.seed})"


@dataclass(frozen=True)
class NormalizationSwitch:
    normalization: str

    def describe(self) -> str:
        return f"normalization -> {self.normalization}"


@dataclass(frozen=True)
class TaylorTruncation:
    """Chebyshev input from Taylor series truncated after N1 and N2 terms"""
    first: int
    second: int

    def describe(self) -> str:
        return f"Taylor truncation N={self.first} vs N={self.second}"


Perturbation = Union[NodeCountChange, CoefficientNoise, NormalizationSwitch, TaylorTruncation]


def _zones(xs: np.ndarray, mask: np.ndarray) -> List[Tuple[float, float]]:
    """Intervals covering each run of masked grid points, widened by one grid step"""
    zones = []
    i = 0
    while i < mask.size:
        if not mask[i]:
            i += 1
            continue
        start = i
        while i + 1 < mask.size and mask[i + 1]:
            i += 1
        zones.append((float(xs[max(start - 1, 0)]), float(xs[min(i + 1, xs.size - 1)])))
        i += 1
    return zones


def error_approximant(r1: RationalApproximant, r2: RationalApproximant,
                      checkpoints: int = analysis.DEFAULT_CHECKPOINTS) -> ErrorApproximant:
    """dP = P2 - P1 and dQ = Q2 - Q1, with zones around the real zeros of dQ

    Raises:
        ShapeError: the approximants differ in parity form, degrees or domain
    """
    if not r1.same_shape(r2):
        raise ShapeError(f"Error approximant needs matching shapes, got {r1.parity} {r1.degrees} "
                         f"and {r2.parity} {r2.degrees}")
    delta_num = r2.numerator - r1.numerator
    delta_den = r2.denominator - r1.denominator
    degenerate = delta_num.is_zero() and delta_den.is_zero()
    delta = ErrorApproximant(delta_num, delta_den, [], r1.parity, r1.domain, degenerate)
    if degenerate:
        return delta

    xs = r1.domain.grid(checkpoints)
    _, dq = delta.parts(xs)
    peak = float(np.max(np.abs(dq)))
    if peak == 0.0:
        delta.excluded_zones = [(r1.domain.a, r1.domain.b)]
        return delta
    mask = np.abs(dq) < EXCLUSION_FRACTION * peak
    signs = np.sign(dq)
    changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    mask[changes] = True
    mask[changes + 1] = True
    delta.excluded_zones = _zones(xs, mask)
    return delta


def identity_residuals(r1: RationalApproximant, r2: RationalApproximant,
                       checkpoints: int = analysis.DEFAULT_CHECKPOINTS) -> Tuple[float, float]:
    """Largest relative residuals of R2 - R1 = (dQ/Q2)(dP/dQ - P1/Q1) and of R2 - R1 = dP/Q2 - (dQ/Q2) R1

    Points where Q1, Q2 (and dQ for the first form) fall below 1e-8 are skipped.
    """
    delta = error_approximant(r1, r2, checkpoints)
    xs = r1.domain.grid(checkpoints)
    p1, q1 = r1.parts(xs)
    p2, q2 = r2.parts(xs)
    dp, dq = delta.parts(xs)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio1 = p1 / q1
        ratio2 = p2 / q2
        lhs = ratio2 - ratio1
        scale = np.maximum(np.maximum(np.abs(ratio1), np.abs(ratio2)), 1e-300)
        usable = (np.abs(q1) > DENOMINATOR_FLOOR) & (np.abs(q2) > DENOMINATOR_FLOOR)
        first = usable & (np.abs(dq) > DENOMINATOR_FLOOR)

        residual_first = np.abs(lhs - (dq / q2) * (dp / dq - ratio1)) / scale
        residual_second = np.abs(lhs - (dp / q2 - (dq / q2) * ratio1)) / scale

    first_value = float(np.max(residual_first[first])) if np.any(first) else 0.0
    second_value = float(np.max(residual_second[usable])) if np.any(usable) else 0.0
    return first_value, second_value


def coeff_rel_error(y1: np.ndarray, y2: np.ndarray) -> float:
    """Largest relative coefficient discrepancy after rescaling y2 onto y1 (least squares)"""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    if y1.shape != y2.shape:
        raise ShapeError(f"Coefficient vectors differ in length: {y1.size} vs {y2.size}")
    norm = float(y2 @ y2)
    if norm == 0.0:
        return math.inf
    alpha = float(y1 @ y2) / norm
    nonzero = y1 != 0.0
    if not np.any(nonzero):
        return 0.0
    return float(np.max(np.abs(alpha * y2[nonzero] - y1[nonzero]) / np.abs(y1[nonzero])))


def error_approximant_error(f: TargetFunction, delta: ErrorApproximant,
                            checkpoints: int = analysis.DEFAULT_CHECKPOINTS) -> Optional[float]:
    """max |f - dP/dQ| over the checkpoints outside the excluded zones"""
    if delta.degenerate:
        return None
    xs = delta.domain.grid(checkpoints)
    keep = ~delta.is_excluded(xs)
    if not np.any(keep):
        return None
    values = delta.evaluate(xs[keep])
    finite = np.isfinite(values)
    if not np.any(finite):
        return None
    return float(np.max(np.abs(f(xs[keep][finite]) - values[finite])))


def _symmetric_taylor(f: TargetFunction, terms: int) -> TaylorSeries:
    """Taylor coefficients of f(B t), the target in the reduced variable"""
    domain = f.domain
    if not (domain.is_symmetric or domain.is_unit):
        raise ValueError("Taylor-based input needs a domain symmetric about 0")
    series = f.taylor(terms)
    return TaylorSeries(series.coeffs * domain.b ** np.arange(len(series)))


def truncated_series(f: TargetFunction, m: int, n: int, parity: str, taylor_terms: int) -> ChebSeries:
    """Chebyshev input built from the Taylor polynomial of degree N

    Coefficients past N are exactly zero and are padded in up to what the
    cross-multiplied scheme reads.
    """
    plain_m, plain_n = plain_degrees(m, n, parity)
    needed = plain_n + 2 * plain_m + 1
    series = taylor_to_cheb_truncated(_symmetric_taylor(f, taylor_terms + 1), taylor_terms,
                                      min(taylor_terms, needed - 1))
    coeffs = np.zeros(max(needed, len(series.coeffs)))
    coeffs[:len(series.coeffs)] = series.coeffs
    return ChebSeries(coeffs)


def _noisy_series(series: ChebSeries, level: float, seed: int) -> ChebSeries:
    if level <= 0.0:
        return series
    rng = np.random.default_rng(seed)
    return ChebSeries(series.coeffs * (1.0 + level * rng.uniform(-1.0, 1.0, size=len(series.coeffs))))


def _unsupported(method: str, perturbation: Perturbation):
    raise ValueError(f"Perturbation '{perturbation.describe()}' does not apply to method {method}")


def build_pair(f: TargetFunction, m: int, n: int, opts: BuildOptions, perturbation: Perturbation,
               method: str = 'pc-linear') -> Tuple[RationalApproximant, RationalApproximant, Optional[float], Dict[str, Any]]:
    """The two constructions of an experiment: (r1, r2, cond of the first, extras)"""
    if method not in METHODS:
        raise ValueError(f"Unknown method '{method}', expected one of {', '.join(METHODS)}")
    parity = check_parity(opts.parity_form)
    extras: Dict[str, Any] = {}

    if method == 'pc-linear':
        if isinstance(perturbation, NodeCountChange):
            second = opts.replace(quadrature_nodes=perturbation.nodes)
        elif isinstance(perturbation, CoefficientNoise):
            second = opts.replace(matrix_noise=perturbation.level, noise_seed=perturbation.seed)
        elif isinstance(perturbation, NormalizationSwitch):
            second = opts.replace(normalization=perturbation.normalization)
        else:
            _unsupported(method, perturbation)
        first_outcome = build_linear_integral(f, m, n, opts)
        second_outcome = build_linear_integral(f, m, n, second)
        extras['system'] = first_outcome.system
        extras['solutions'] = (first_outcome.solution, second_outcome.solution)
        return first_outcome.approximant, second_outcome.approximant, first_outcome.condition, extras

    if method == 'pade':
        if parity != PLAIN:
            raise ValueError("Padé experiments run in the plain form")
        if not isinstance(perturbation, CoefficientNoise):
            _unsupported(method, perturbation)
        series = f.taylor(m + n + 2)
        r1 = pade_from_taylor(series, m, n, f.domain)
        r2 = pade_from_taylor(series, m, n, f.domain, matrix_noise=perturbation.level,
                              noise_seed=perturbation.seed)
        extras['taylor'] = series
        return r1, r2, r1.condition, extras

    builder = build_linear_cross if method == 'pc-cross' else build_nonlinear
    if isinstance(perturbation, NodeCountChange):
        c1 = series_input(f, m, n, parity, opts.quadrature_nodes)
        c2 = series_input(f, m, n, parity, perturbation.nodes)
    elif isinstance(perturbation, CoefficientNoise):
        c1 = series_input(f, m, n, parity, opts.quadrature_nodes)
        c2 = _noisy_series(c1, perturbation.level, perturbation.seed)
    elif isinstance(perturbation, TaylorTruncation):
        c1 = truncated_series(f, m, n, parity, perturbation.first)
        c2 = truncated_series(f, m, n, parity, perturbation.second)
    else:
        _unsupported(method, perturbation)
    r1 = builder(c1, m, n, parity, f.domain)
    r2 = builder(c2, m, n, parity, f.domain)
    extras['series'] = (c1, c2)
    return r1, r2, r1.condition, extras


def autocorrection_experiment(f: TargetFunction, m: int, n: int, opts: Optional[BuildOptions] = None,
                              perturbation: Optional[Perturbation] = None,
                              method: str = 'pc-linear') -> ExperimentRecord:
    """Build twice under a perturbation and measure coefficient and function discrepancies"""
    opts = opts or BuildOptions()
    perturbation = perturbation or CoefficientNoise(0.0)
    r1, r2, cond, _ = build_pair(f, m, n, opts, perturbation, method)

    e1 = analysis.error_report(f, r1, checkpoints=opts.checkpoints).abs_error
    e2 = analysis.error_report(f, r2, checkpoints=opts.checkpoints).abs_error
    delta = error_approximant(r1, r2, opts.checkpoints)
    record = ExperimentRecord(
        coeff_rel_error=coeff_rel_error(r1.coefficient_vector(), r2.coefficient_vector()),
        approximant_error_r1=e1,
        approximant_error_r2=e2,
        error_approximant_error=error_approximant_error(f, delta, opts.checkpoints),
        cond=cond,
        degenerate=delta.degenerate,
        excluded_zones=list(delta.excluded_zones),
        perturbation=perturbation.describe()
    )
    logging_service.info(
        f"Autocorrection {method} {f.name} m={m} n={n} [{record.perturbation}]: "
        f"coeff {record.coeff_rel_error:.3e}, errors {e1:.3e}/{e2:.3e}",
        'autocorrection'
    )
    return record


def residual_check(delta: ErrorApproximant, system: np.ndarray,
                   y1: Optional[np.ndarray] = None, y2: Optional[np.ndarray] = None) -> float:
    """||H dy||_1 for the homogeneous construction matrix H

    With both solution vectors supplied the triangle bound
    ||H dy|| <= ||H y1|| + ||H y2|| is checked as well.

    Raises:
        ShapeError: H does not match the coefficient vector
        ValueError: the triangle bound fails beyond rounding
    """
    system = np.asarray(system, dtype=float)
    dy = delta.coefficient_vector()
    if system.ndim != 2 or system.shape[1] != dy.size:
        raise ShapeError(f"System with shape {system.shape} does not match {dy.size} coefficients")
    residual = norm1(system @ dy)
    if y1 is not None and y2 is not None:
        bound = norm1(system @ np.asarray(y1, dtype=float)) + norm1(system @ np.asarray(y2, dtype=float))
        slack = 64 * np.finfo(float).eps * norm1(system) * (norm1(y1) + norm1(y2))
        if residual > bound + slack:
            raise ValueError(f"Residual {residual:.3e} exceeds the triangle bound {bound:.3e}")
    return residual


def pade_error_approximant_order(t: TaylorSeries, r1: RationalApproximant, r2: RationalApproximant,
                                 threshold: float = ORDER_THRESHOLD) -> Union[int, float]:
    """First Taylor index of f dQ - dP above threshold * scale (math.inf if none)"""
    delta = error_approximant(r1, r2)
    if delta.degenerate:
        logging_service.debug("Degenerate Padé pair: dP and dQ both vanish", 'autocorrection')
        return math.inf
    length = len(t)
    product = np.convolve(delta.delta_den.coeffs, t.coeffs)[:length]
    product = np.pad(product, (0, max(0, length - product.size)))
    series = product - delta.delta_num.padded(length).coeffs[:length]

    reference = np.convolve(r1.denominator.coeffs, t.coeffs)[:length]
    scale = max(float(np.max(np.abs(reference))), float(np.max(np.abs(r1.numerator.coeffs))))
    above = np.nonzero(np.abs(series) > threshold * scale)[0]
    if above.size == 0:
        return math.inf
    return int(above[0])


def _plain_cheb(p, parity: str, numerator: bool) -> ChebSeries:
    plain = p
    if parity != PLAIN:
        plain = p.in_square()
        if parity == ODD and numerator:
            plain = plain.times_x()
    return monomial_to_cheb(plain)


def cheb_error_approximant_residual(c: ChebSeries, delta: ErrorApproximant, relative: bool = False) -> float:
    """max over i = 0..n of |integral of (f dQ - dP) T_i w| from Chebyshev series arithmetic

    n is the plain numerator degree; with relative=True the value is
    divided by the largest such integral of f dQ.
    """
    dq = _plain_cheb(delta.delta_den, delta.parity, numerator=False)
    dp = _plain_cheb(delta.delta_num, delta.parity, numerator=True)
    product = cheb_multiply(c, dq)
    n = dp.degree
    length = max(n + 1, 1)
    product_coeffs = np.pad(product.coeffs, (0, max(0, length - len(product.coeffs))))[:length]
    numerator_coeffs = np.pad(dp.coeffs, (0, max(0, length - len(dp.coeffs))))[:length]

    # integral of T_i^2 w is pi for i = 0 and pi/2 otherwise
    weights = np.full(length, np.pi / 2.0)
    weights[0] = np.pi
    residual = float(np.max(np.abs(weights * (product_coeffs - numerator_coeffs))))
    if not relative:
        return residual
    scale = float(np.max(np.abs(weights * product_coeffs))) if length else 0.0
    return residual / scale if scale > 0.0 else residual


def normalization_constraint(r1: RationalApproximant, r2: RationalApproximant, normalization: str) -> float:
    """Normalization row applied to the coefficient difference (zero for a shared row)"""
    if not r1.same_shape(r2):
        raise ShapeError("Normalization constraint needs matching shapes")
    m, n = r1.degrees
    row = normalization_row(m, n, normalization)
    return float(row @ (r2.coefficient_vector() - r1.coefficient_vector()))


def truncation_sweep(f: TargetFunction, m: int, n: int, taylor_terms: Sequence[int],
                     parity: Optional[str] = None, method: str = 'pc-nonlinear',
                     checkpoints: int = analysis.DEFAULT_CHECKPOINTS) -> Dict[str, List[Dict[str, Any]]]:
    """Errors and condition numbers per Taylor truncation N, and error-approximant errors of consecutive pairs"""
    if method not in ('pc-cross', 'pc-nonlinear'):
        raise ValueError("Truncation sweeps use the pc-cross or pc-nonlinear method")
    parity = parity or f.parity_hint or PLAIN
    builder = build_linear_cross if method == 'pc-cross' else build_nonlinear

    approximants = []
    rows = []
    for terms in taylor_terms:
        r = builder(truncated_series(f, m, n, parity, terms), m, n, parity, f.domain)
        report = analysis.error_report(f, r, checkpoints=checkpoints)
        approximants.append(r)
        rows.append({'N': int(terms), 'abs_error': report.abs_error, 'rel_error': report.rel_error,
                     'condition': r.condition})

    pairs = []
    for (first, r1), (second, r2) in zip(zip(taylor_terms, approximants), zip(taylor_terms[1:], approximants[1:])):
        delta = error_approximant(r1, r2, checkpoints)
        pairs.append({
            'N1': int(first),
            'N2': int(second),
            'coeff_rel_error': coeff_rel_error(r1.coefficient_vector(), r2.coefficient_vector()),
            'error_approximant_error': error_approximant_error(f, delta, checkpoints),
            'excluded_zones': [[lo, hi] for lo, hi in delta.excluded_zones]
        })
    return {'rows': rows, 'pairs': pairs}
