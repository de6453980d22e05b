"""
Padé–Chebyshev Service
Linear Padé–Chebyshev approximants by quadrature, the cross-multiplied
scheme on Chebyshev coefficients and the nonlinear (Clenshaw–Lord) scheme
"""

import math
from typing import Optional, Tuple

import numpy as np

from app.core.exceptions import ConstructionError, NonexistenceError, SingularMatrixError
from app.models.polynomials import ChebSeries, Domain, Polynomial
from app.models.rational import ODD, PLAIN, RationalApproximant, TaylorSeries, check_parity, plain_degrees
from app.models.reports import BuildOptions, BuildOutcome, Weight
from app.models.target import TargetFunction
from app.services import analysis
from app.services.cheb_core import (
    DEGREE_CAP, cheb_to_monomial, cheb_vandermonde, fourier_cheb_coeffs, gauss_cheb_nodes,
    monomial_to_cheb
)
from app.services.linear_algebra import CONSTRUCTION_SINGULAR_FACTOR, perturb_matrix, solve
from app.services.logging_service import logging_service

# |t| below this counts as the origin when regularising f(x)/x
ORIGIN_TOLERANCE = 1e-12


def _require_symmetric(domain: Domain, parity: str):
    if parity != PLAIN and not domain.is_symmetric:
        raise ValueError(f"The {parity} form needs a domain symmetric about 0, got [{domain.a}, {domain.b}]")


def odd_quotient(f: TargetFunction, t: np.ndarray) -> np.ndarray:
    """phi(t) = f(x(t)) / t on a symmetric domain, with phi(0) filled by its limit"""
    values = f.on_unit(t)
    phi = np.empty_like(values)
    origin = np.abs(t) < ORIGIN_TOLERANCE
    phi[~origin] = values[~origin] / t[~origin]
    if np.any(origin):
        if f.derivative_at_zero is not None:
            phi[origin] = f.domain.b * f.derivative_at_zero
        else:
            # phi is even: quadratic extrapolation from the two nearest positive nodes
            t1, t2 = 1e-3, 2e-3
            phi1, phi2 = f.on_unit(np.array([t1, t2])) / np.array([t1, t2])
            phi[origin] = (t2 * t2 * phi1 - t1 * t1 * phi2) / (t2 * t2 - t1 * t1)
    return phi


def _check_odd_target(f: TargetFunction):
    at_zero = float(f(np.array([0.0]))[0])
    scale = float(np.max(np.abs(f.on_unit(np.array([-1.0, -0.5, 0.5, 1.0])))))
    if abs(at_zero) > 1e-12 * max(scale, 1.0):
        raise ValueError(f"The odd form needs f(0) = 0, got f(0) = {at_zero!r}")


def sampled_form(f: TargetFunction, parity: str, nodes: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    """(values, basis variable, Chebyshev order step) of the system for a parity form

    plain: f(t), t and T_k(t); even: f(t), t^2 and T_2k(t); odd: f(t)/t, t^2 and T_2k(t).
    """
    if parity == PLAIN:
        return f.on_unit(nodes), nodes, 1
    values = odd_quotient(f, nodes) if parity == ODD else f.on_unit(nodes)
    return values, nodes * nodes, 2


def orthogonality_system(f: TargetFunction, m: int, n: int, parity: str = PLAIN,
                         s: int = 128) -> np.ndarray:
    """Homogeneous (m+n+1) x (m+n+2) matrix H with H @ (a, b) = 0

    Row k approximates the integral of (fQ - P) T_k(t) / sqrt(1 - t^2)
    with s-node Gauss–Chebyshev quadrature (T_2k rows for the parity forms).
    """
    nodes = gauss_cheb_nodes(s)
    values, basis, step = sampled_form(f, parity, nodes)
    rows = m + n + 1
    chebyshev = cheb_vandermonde(nodes, step * (rows - 1))[:, ::step]
    powers = basis[:, None] ** np.arange(max(m, n) + 1)

    weight = np.pi / s
    numerator_block = -weight * chebyshev.T @ powers[:, :n + 1]
    denominator_block = weight * chebyshev.T @ (values[:, None] * powers[:, :m + 1])
    return np.hstack([numerator_block, denominator_block])


def normalization_row(m: int, n: int, normalization: str) -> np.ndarray:
    """Unit row pinning b_0, b_m or a_n to 1 in the (a, b) unknown vector"""
    row = np.zeros(m + n + 2)
    if normalization == 'b0':
        row[n + 1] = 1.0
    elif normalization == 'bm':
        row[n + 1 + m] = 1.0
    elif normalization == 'an':
        row[n] = 1.0
    else:
        raise ValueError(f"Unknown normalization '{normalization}'")
    return row


def build_linear_integral(f: TargetFunction, m: int, n: int,
                          opts: Optional[BuildOptions] = None) -> BuildOutcome:
    """Linear Padé–Chebyshev approximant from the orthogonality system

    Args:
        f: Target function on its domain
        m: Denominator degree of the parity form
        n: Numerator degree of the parity form
        opts: Normalization, parity form, quadrature nodes, checkpoints, weight, noise

    Returns:
        BuildOutcome with the approximant, the condition number of the
        square system and the error report

    Raises:
        ConstructionError: the system is singular at working precision
        EvaluationError: f is undefined at a node
    """
    opts = opts or BuildOptions()
    if m < 0 or n < 0:
        raise ValueError("Degrees must be nonnegative")
    parity = check_parity(opts.parity_form)
    _require_symmetric(f.domain, parity)
    plain_m, plain_n = plain_degrees(m, n, parity)
    if max(plain_m, plain_n) > DEGREE_CAP:
        raise ValueError(f"Degrees ({plain_m}, {plain_n}) exceed the cap {DEGREE_CAP}")
    if parity == ODD:
        _check_odd_target(f)

    system = orthogonality_system(f, m, n, parity, opts.quadrature_nodes)
    matrix = np.vstack([perturb_matrix(system, opts.matrix_noise, opts.noise_seed),
                        normalization_row(m, n, opts.normalization)])
    rhs = np.zeros(m + n + 2)
    rhs[-1] = 1.0

    try:
        result = solve(matrix, rhs, singular_factor=CONSTRUCTION_SINGULAR_FACTOR)
    except SingularMatrixError as e:
        logging_service.warning(f"Singular Padé–Chebyshev system for {f.name} (m={m}, n={n})", 'pade_chebyshev')
        raise ConstructionError(
            f"Linear Padé–Chebyshev system for {f.name} with m={m}, n={n} is singular",
            condition=math.inf, pivot_index=e.pivot_index
        ) from e

    y = result.solution
    diagnostics = {
        'condition': result.condition,
        'method': 'pc-linear',
        'normalization': opts.normalization,
        'quadrature_nodes': opts.quadrature_nodes
    }
    try:
        approximant = RationalApproximant(Polynomial(y[:n + 1]), Polynomial(y[n + 1:]), parity,
                                          f.domain, diagnostics)
    except ValueError as e:
        raise ConstructionError(str(e), condition=result.condition) from e

    report = analysis.error_report(f, approximant, Weight(opts.weight), opts.checkpoints)
    report.condition = result.condition
    logging_service.info(
        f"pc-linear {f.name} m={m} n={n} {parity}: abs={report.abs_error:.3e} cond={result.condition:.3e}",
        'pade_chebyshev'
    )
    return BuildOutcome(approximant, result.condition, report, system=system, solution=y)


def orthogonality_residuals(f: TargetFunction, r: RationalApproximant, s: int = 512) -> np.ndarray:
    """Quadrature values of the integrals of (fQ - P) T_k w, k = 0..m+n, in r's form"""
    m, n = r.degrees
    system = orthogonality_system(f, m, n, r.parity, s)
    return system @ r.coefficient_vector()


def _coefficient(primed: np.ndarray, index: int) -> float:
    if index < len(primed):
        return float(primed[index])
    return 0.0


def _numerator_from_primed(primed: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """a_i = 1/2 sum'_j b_j (c_{i+j} + c_{|i-j|}), i = 0..n, primed sums"""
    a = np.empty(n + 1)
    for i in range(n + 1):
        total = b[0] * _coefficient(primed, i)
        for j in range(1, len(b)):
            total += b[j] * (_coefficient(primed, i + j) + _coefficient(primed, abs(i - j)))
        a[i] = 0.5 * total
    return a


def _fold(numerator: Polynomial, denominator: Polynomial, m: int, n: int,
          parity: str) -> Tuple[Polynomial, Polynomial]:
    """Extract the parity form from a plain approximant of the matching plain degrees"""
    if parity == PLAIN:
        return numerator, denominator
    den = denominator.coeffs[::2][:m + 1]
    num = numerator.coeffs[1::2] if parity == ODD else numerator.coeffs[::2]
    return Polynomial(num[:n + 1]), Polynomial(den)


def _from_primed_pair(primed_num: np.ndarray, primed_den: np.ndarray, m: int, n: int,
                      parity: str, domain: Domain, diagnostics: dict) -> RationalApproximant:
    numerator = cheb_to_monomial(ChebSeries.from_primed(primed_num))
    denominator = cheb_to_monomial(ChebSeries.from_primed(primed_den))
    numerator, denominator = _fold(numerator, denominator, m, n, parity)
    return RationalApproximant(numerator, denominator, parity, domain, diagnostics)


def _check_series(c: ChebSeries, needed: int, what: str):
    if len(c.coeffs) < needed:
        raise ValueError(f"{what} needs Chebyshev coefficients c_0..c_{needed - 1}, got {len(c.coeffs)}")


def build_linear_cross(c: ChebSeries, m: int, n: int, parity: str = PLAIN,
                       domain: Optional[Domain] = None) -> RationalApproximant:
    """Linear Padé–Chebyshev approximant from Chebyshev coefficients (cross-multiplied scheme)

    c holds plain-convention coefficients of f on the domain; b_0 = 2 in
    the primed convention and b_1..b_m solve
    sum_j b_j (c_{i+j} + c_{|i-j|}) = -2 c_i for i = n+1..n+m.
    """
    parity = check_parity(parity)
    domain = domain or Domain()
    _require_symmetric(domain, parity)
    plain_m, plain_n = plain_degrees(m, n, parity)
    _check_series(c, plain_n + 2 * plain_m + 1, "The cross-multiplied scheme")

    primed = c.to_primed()
    b = np.zeros(plain_m + 1)
    b[0] = 2.0
    condition = 1.0
    if plain_m > 0:
        matrix = np.array([
            [_coefficient(primed, i + j) + _coefficient(primed, abs(i - j)) for j in range(1, plain_m + 1)]
            for i in range(plain_n + 1, plain_n + plain_m + 1)
        ])
        rhs = np.array([-2.0 * _coefficient(primed, i) for i in range(plain_n + 1, plain_n + plain_m + 1)])
        try:
            result = solve(matrix, rhs, singular_factor=CONSTRUCTION_SINGULAR_FACTOR)
        except SingularMatrixError as e:
            raise ConstructionError(
                f"Cross-multiplied system with m={m}, n={n} is singular",
                condition=math.inf, pivot_index=e.pivot_index
            ) from e
        b[1:] = result.solution
        condition = result.condition

    a = _numerator_from_primed(primed, b, plain_n)
    logging_service.debug(f"pc-cross m={m} n={n} {parity}: cond={condition:.3e}", 'pade_chebyshev')
    return _from_primed_pair(a, b, m, n, parity, domain, {'condition': condition, 'method': 'pc-cross'})


def build_nonlinear(c: ChebSeries, m: int, n: int, parity: str = PLAIN,
                    domain: Optional[Domain] = None) -> RationalApproximant:
    """Nonlinear Padé–Chebyshev approximant

    gamma_0 = 1 and gamma_1..gamma_m solve sum_j gamma_j c_{|k-j|} = -c_k
    for k = n+1..n+m; the denominator is mu * sum_i gamma_i gamma_{i+j}
    with mu chosen so that b_0 = 2, and the numerator follows the
    cross-multiplied formula.

    Raises:
        NonexistenceError: the gamma system is singular
    """
    parity = check_parity(parity)
    domain = domain or Domain()
    _require_symmetric(domain, parity)
    plain_m, plain_n = plain_degrees(m, n, parity)
    _check_series(c, plain_n + plain_m + 1, "The nonlinear scheme")

    primed = c.to_primed()
    gamma = np.zeros(plain_m + 1)
    gamma[0] = 1.0
    condition = 1.0
    if plain_m > 0:
        matrix = np.array([
            [_coefficient(primed, abs(k - j)) for j in range(1, plain_m + 1)]
            for k in range(plain_n + 1, plain_n + plain_m + 1)
        ])
        rhs = -np.array([_coefficient(primed, k) for k in range(plain_n + 1, plain_n + plain_m + 1)])
        try:
            result = solve(matrix, rhs, singular_factor=CONSTRUCTION_SINGULAR_FACTOR)
        except SingularMatrixError as e:
            raise NonexistenceError(
                f"Nonlinear Padé–Chebyshev approximant with m={m}, n={n} does not exist",
                condition=math.inf, pivot_index=e.pivot_index
            ) from e
        gamma[1:] = result.solution
        condition = result.condition

    mu = 2.0 / float(np.sum(gamma * gamma))
    b = np.array([mu * float(np.dot(gamma[:plain_m + 1 - j], gamma[j:])) for j in range(plain_m + 1)])
    a = _numerator_from_primed(primed, b, plain_n)
    logging_service.debug(f"pc-nonlinear m={m} n={n} {parity}: cond={condition:.3e}", 'pade_chebyshev')
    return _from_primed_pair(a, b, m, n, parity, domain, {'condition': condition, 'method': 'pc-nonlinear'})


def taylor_to_cheb_truncated(t: TaylorSeries, taylor_terms: int, cheb_terms: int) -> ChebSeries:
    """Chebyshev coefficients c_0..c_K of the Taylor polynomial of degree N

    Raises:
        ValueError: N < K or too few Taylor coefficients
        DegreeCapError: N above the conversion cap
    """
    if cheb_terms < 0 or taylor_terms < 0:
        raise ValueError("Term counts must be nonnegative")
    if taylor_terms < cheb_terms:
        raise ValueError(f"Taylor degree N={taylor_terms} must be at least K={cheb_terms}")
    if len(t) < taylor_terms + 1:
        raise ValueError(f"Taylor degree N={taylor_terms} needs {taylor_terms + 1} coefficients, got {len(t)}")
    series = monomial_to_cheb(t.truncated(taylor_terms + 1).as_polynomial())
    return series.truncated(cheb_terms)


def series_input(f: TargetFunction, m: int, n: int, parity: str, s: int = 128,
                 extra: int = 0) -> ChebSeries:
    """Fourier–Chebyshev coefficients of f covering the cross-multiplied scheme's needs"""
    plain_m, plain_n = plain_degrees(m, n, check_parity(parity))
    return fourier_cheb_coeffs(f, plain_n + 2 * plain_m + extra, s)

