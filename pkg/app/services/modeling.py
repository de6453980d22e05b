"""
Modeling Service
Spline interpolation of sampled data followed by a rational model of the spline
"""

from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from app.models.reports import BuildOptions, BuildOutcome, Weight
from app.models.target import SOURCE_SAMPLES, SPLINE_KINDS, SampleTable, TargetFunction
from app.services import analysis
from app.services.logging_service import logging_service
from app.services.pade_chebyshev import build_linear_integral

CUBIC_BOUNDARY_CONDITIONS = ('not-a-knot', 'natural')

# Arguments this far (relative to the span) outside [x_1, x_nu] are rounding, not extrapolation
EDGE_TOLERANCE = 1e-12


def spline_fit(table: SampleTable, kind: str = 'cubic', bc: str = 'not-a-knot') -> TargetFunction:
    """Linear or cubic spline through every sample, defined on [x_1, x_nu] only

    Args:
        table: Sampled data
        kind: linear or cubic
        bc: Cubic boundary condition, not-a-knot or natural

    Raises:
        ValueError: unknown kind or boundary condition, or too few points
    """
    if kind not in SPLINE_KINDS:
        raise ValueError(f"Unknown spline kind '{kind}', expected linear or cubic")
    if kind == 'cubic':
        if bc not in CUBIC_BOUNDARY_CONDITIONS:
            raise ValueError(f"Unknown boundary condition '{bc}', expected not-a-knot or natural")
        if table.size < 4:
            raise ValueError(f"A cubic spline needs at least 4 points, got {table.size}")

    x, y = table.x, table.y
    lo, hi = float(x[0]), float(x[-1])
    slack = EDGE_TOLERANCE * (hi - lo)

    if kind == 'linear':
        def interpolate(points: np.ndarray) -> np.ndarray:
            return np.interp(points, x, y)
    else:
        spline = CubicSpline(x, y, bc_type=bc, extrapolate=False)

        def interpolate(points: np.ndarray) -> np.ndarray:
            return spline(points)

    def evaluate(points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        outside = (points < lo - slack) | (points > hi + slack)
        values = np.asarray(interpolate(np.clip(points, lo, hi)), dtype=float)
        return np.where(outside, np.nan, values)

    parameters = {'spline': kind, 'points': table.size}
    if kind == 'cubic':
        parameters['bc'] = bc
    return TargetFunction(f"{table.name}-{kind}", evaluate, table.domain, source=SOURCE_SAMPLES,
                          parameters=parameters)


def fit_model(table: SampleTable, m: int, n: int, kind: str = 'cubic',
              opts: Optional[BuildOptions] = None, reference: Optional[TargetFunction] = None,
              bc: str = 'not-a-knot') -> BuildOutcome:
    """Rational model of sampled data: spline_fit, then build_linear_integral on [x_1, x_nu]

    With a reference function the report measures the model against it
    (the ground truth) instead of against the spline.
    """
    opts = opts or BuildOptions()
    spline = spline_fit(table, kind, bc)
    outcome = build_linear_integral(spline, m, n, opts)

    if reference is not None:
        truth = reference.with_domain(table.domain)
        report = analysis.error_report(truth, outcome.approximant, Weight(opts.weight), opts.checkpoints)
        report.condition = outcome.condition
        outcome.report = report

    logging_service.info(
        f"Model of {table.name} ({table.size} points, {kind} spline) m={m} n={n}: "
        f"abs={outcome.report.abs_error:.3e}", 'modeling'
    )
    return outcome
