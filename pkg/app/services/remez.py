"""
Remez Service
Best rational approximation by the exchange algorithm with an iterated
linearisation of the levelled-error equations
"""

from typing import List, Optional, Tuple

import numpy as np

from app.core.exceptions import (
    ConstructionError, InsufficientAlternationError, RemezDivergenceError, SingularMatrixError
)
from app.models.polynomials import Domain, Polynomial
from app.models.rational import ODD, PLAIN, RationalApproximant, check_parity
from app.models.reports import ABSOLUTE, RemezState, Weight
from app.models.target import TargetFunction
from app.services import analysis
from app.services.linear_algebra import CONSTRUCTION_SINGULAR_FACTOR, solve
from app.services.logging_service import logging_service
from app.services.pade_chebyshev import odd_quotient

DEFAULT_TOLERANCE = 1e-2
MAX_CYCLES = 50
MAX_INNER = 20
INNER_TOLERANCE = 1e-3

# Outer cycles in a row with a growing error before giving up
DIVERGENCE_CYCLES = 3


def default_initial_state(domain: Domain, m: int, n: int, parity: str = PLAIN) -> RemezState:
    """Chebyshev extremum nodes -cos(k pi / (m+n+1)) mapped to the domain

    For the even and odd forms the nodes are taken in u = t^2 on [0, 1]
    and mapped back to x = B sqrt(u) on [0, B].
    """
    parity = check_parity(parity)
    count = m + n + 2
    k = np.arange(count)
    chebyshev = -np.cos(k * np.pi / (count - 1))
    if parity == PLAIN:
        points = domain.from_unit(chebyshev)
    else:
        points = domain.b * np.sqrt((1.0 + chebyshev) / 2.0)
    return RemezState(critical_points=points, lam=0.0)


def _reduced(f: TargetFunction, parity: str, weight: Weight, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u, F(u), rho(u)) of the reduced problem at the critical points"""
    t = f.domain.to_unit(x)
    if parity == PLAIN:
        u, values = t, f(x)
    elif parity == ODD:
        u, values = t * t, odd_quotient(f, t)
    else:
        u, values = t * t, f(x)
    rho = values if weight.is_relative else np.ones_like(values)
    return u, values, rho


def _select_window(extrema: List[Tuple[float, float]], count: int) -> List[Tuple[float, float]]:
    """`count` consecutive extrema containing the largest one, with the largest smallest magnitude"""
    if len(extrema) <= count:
        return extrema
    magnitudes = np.abs([v for _, v in extrema])
    peak = int(np.argmax(magnitudes))
    best_start, best_min = 0, -1.0
    for start in range(0, len(extrema) - count + 1):
        if not start <= peak < start + count:
            continue
        smallest = float(np.min(magnitudes[start:start + count]))
        if smallest > best_min:
            best_start, best_min = start, smallest
    return extrema[best_start:best_start + count]


def _alternating(extrema: List[Tuple[float, float]]) -> bool:
    signs = np.sign([v for _, v in extrema])
    return bool(np.all(signs != 0) and np.all(signs[:-1] * signs[1:] < 0))


def _validate_points(points: np.ndarray, count: int, lo: float, hi: float):
    if points.size != count:
        raise InsufficientAlternationError(
            f"Exchange needs {count} critical points, got {points.size}", count=int(points.size)
        )
    if np.any(np.diff(points) <= 0):
        raise InsufficientAlternationError("Critical points must be strictly increasing")
    span = 1e-12 * (hi - lo)
    if points[0] < lo - span or points[-1] > hi + span:
        raise InsufficientAlternationError(f"Critical points must lie in [{lo}, {hi}]")


def solve_levelled_system(u: np.ndarray, values: np.ndarray, rho: np.ndarray, m: int, n: int,
                          lam: float, max_inner: int = MAX_INNER) -> Tuple[np.ndarray, np.ndarray, float]:
    """Solve sum a_i u^i + mu_k sum b_j u^j + (-1)^k rho_k lambda = F_k, b_0 = 1

    mu_k = (-1)^k rho_k lambda_0 - F_k carries the previous lambda; the
    substitution is repeated until lambda settles (a single pass for m = 0).
    """
    count = m + n + 2
    signs = (-1.0) ** np.arange(1, count + 1) * rho
    numerator_columns = u[:, None] ** np.arange(n + 1)
    denominator_columns = u[:, None] ** np.arange(1, m + 1)

    passes = 1 if m == 0 else max_inner
    lam0 = lam
    for _ in range(passes):
        mu = signs * lam0 - values
        matrix = np.hstack([numerator_columns, mu[:, None] * denominator_columns, signs[:, None]])
        try:
            result = solve(matrix, values, singular_factor=CONSTRUCTION_SINGULAR_FACTOR, with_condition=False)
        except SingularMatrixError as e:
            raise ConstructionError(f"Levelled-error system with m={m}, n={n} is singular",
                                    pivot_index=e.pivot_index) from e
        y = result.solution
        lam = float(y[-1])
        if abs(lam - lam0) <= INNER_TOLERANCE * abs(lam):
            break
        lam0 = lam

    a = y[:n + 1]
    b = np.concatenate([[1.0], y[n + 1:n + 1 + m]])
    return a, b, lam


def _log_defect(r: RationalApproximant):
    for name, coeffs in (('numerator', r.numerator.coeffs), ('denominator', r.denominator.coeffs)):
        if len(coeffs) > 1 and abs(coeffs[-1]) <= 1e-13 * float(np.max(np.abs(coeffs))):
            logging_service.info(f"Best approximant looks degenerate: leading {name} coefficient vanishes", 'remez')


def remez_solve(f: TargetFunction, m: int, n: int, w: Optional[Weight] = None,
                init: Optional[RemezState] = None, parity: str = PLAIN,
                tolerance: float = DEFAULT_TOLERANCE, max_cycles: int = MAX_CYCLES,
                max_inner: int = MAX_INNER,
                grid_points: int = analysis.DEFAULT_CHECKPOINTS) -> Tuple[RationalApproximant, RemezState]:
    """Best approximation of f by P/Q with the multi-point exchange

    Args:
        f: Target function
        m: Denominator degree of the parity form
        n: Numerator degree of the parity form
        w: Error weight (absolute by default)
        init: Starting critical points (default_initial_state when omitted)
        parity: plain, even or odd; the odd form needs the relative weight
        tolerance: Exit once | max|e| - |lambda| | <= tolerance * |lambda|
        max_cycles: Cap on exchange cycles
        max_inner: Cap on lambda re-substitutions per cycle
        grid_points: Grid size of the extremum search

    Returns:
        The final approximant and the RemezState of the last cycle

    Raises:
        InsufficientAlternationError: bad critical points or too few extrema
        RemezDivergenceError: the error grew for several cycles in a row
        ConstructionError: the levelled-error system is singular
        ValueError: bad degrees, domain or weight for the form, or max_cycles < 1
    """
    w = w or Weight(ABSOLUTE)
    parity = check_parity(parity)
    if m < 0 or n < 0:
        raise ValueError("Degrees must be nonnegative")
    if max_cycles < 1:
        raise ValueError(f"max_cycles must be at least 1, got {max_cycles}")
    if parity != PLAIN and not f.domain.is_symmetric:
        raise ValueError(f"The {parity} form needs a domain symmetric about 0")
    if parity == ODD and not w.is_relative:
        raise ValueError("The odd form runs on f(x)/x and supports the relative weight only")

    count = m + n + 2
    state = init if init is not None else default_initial_state(f.domain, m, n, parity)
    state = RemezState(np.array(state.critical_points), state.lam, 0, [], False)
    lo, hi = (f.domain.a, f.domain.b) if parity == PLAIN else (0.0, f.domain.b)
    _validate_points(state.critical_points, count, lo, hi)

    grid = f.domain.grid(grid_points)
    previous_error, growth = None, 0
    r = None
    for cycle in range(1, max_cycles + 1):
        u, values, rho = _reduced(f, parity, w, state.critical_points)
        if w.is_relative and np.any(np.abs(values) <= analysis.ZERO_THRESHOLD):
            raise ValueError("The relative weight needs f nonzero at the critical points")
        a, b, lam = solve_levelled_system(u, values, rho, m, n, state.lam, max_inner)
        r = RationalApproximant(Polynomial(a), Polynomial(b), parity, f.domain,
                                {'method': 'remez', 'lambda': lam})
        analysis.check_poles(r, grid)

        ext_lo, ext_hi = analysis.extremum_interval(r, w)
        extrema = analysis.find_extrema(analysis.weighted_error(f, r, w), ext_lo, ext_hi, grid_points)
        state.lam = lam
        state.iteration = cycle
        if not extrema:
            state.converged = True
            state.bracket_history.append((0.0, 0.0))
            break

        window = _select_window(extrema, count)
        max_error = float(np.max(np.abs([v for _, v in extrema])))
        min_error = float(np.min(np.abs([v for _, v in window])))
        state.bracket_history.append((min_error, max_error))
        logging_service.debug(f"Remez cycle {cycle}: lambda={lam:.6e} bracket=[{min_error:.6e}, {max_error:.6e}]",
                              'remez')

        if abs(max_error - abs(lam)) <= tolerance * abs(lam) or max_error <= 1e-15 * float(np.max(np.abs(values))):
            state.converged = True
            break

        if previous_error is not None and max_error > previous_error:
            growth += 1
            if growth >= DIVERGENCE_CYCLES:
                logging_service.warning(f"Remez diverged for {f.name} (m={m}, n={n}) after {cycle} cycles", 'remez')
                raise RemezDivergenceError(f"Remez iteration diverged after {cycle} cycles", state=state)
        else:
            growth = 0
        previous_error = max_error

        if len(window) < count or not _alternating(window):
            raise InsufficientAlternationError(
                f"Error curve has {len(window)} alternating extrema, the exchange needs {count}",
                count=len(window)
            )
        state.critical_points = np.array([x for x, _ in window])

    if not state.converged:
        logging_service.warning(f"Remez reached {max_cycles} cycles without converging for {f.name}", 'remez')
    r.diagnostics['iterations'] = state.iteration
    _log_defect(r)
    logging_service.info(f"Remez {f.name} m={m} n={n} {parity}: lambda={state.lam:.6e} "
                         f"in {state.iteration} cycle(s)", 'remez')
    return r, state


def seed_from_approximant(r: RationalApproximant, f: TargetFunction, w: Optional[Weight] = None) -> RemezState:
    """Critical points taken from the extrema of an existing approximant's error curve

    Raises:
        InsufficientAlternationError: fewer than m+n+2 alternating extrema
    """
    w = w or Weight(ABSOLUTE)
    count = analysis.required_extrema(r)
    lo, hi = analysis.extremum_interval(r, w)
    extrema = analysis.find_extrema(analysis.weighted_error(f, r, w), lo, hi)
    window = _select_window(extrema, count)
    if len(window) < count or not _alternating(window):
        raise InsufficientAlternationError(
            f"Seed approximant has {len(window)} alternating extrema, the exchange needs {count}",
            count=len(window)
        )
    values = np.array([v for _, v in window])
    smallest = float(np.min(np.abs(values)))
    return RemezState(critical_points=[x for x, _ in window], lam=-float(np.sign(values[0])) * smallest)
