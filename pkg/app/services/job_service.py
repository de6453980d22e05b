"""
Job Service
Resolves a JobSpec into a target and options, runs it and assembles the report
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from app.core.config import settings_manager
from app.core.exceptions import UsageError
from app.models.jobs import JobSpec
from app.models.kernels import PRECISIONS
from app.models.polynomials import Domain
from app.models.rational import PLAIN, RationalApproximant
from app.models.reports import ApproxReport, BuildOptions, RemezState, Weight
from app.models.target import SampleTable, TargetFunction
from app.services import analysis, autocorrection, catalog, elemfun, modeling, remez
from app.services.classical_pade import pade_from_taylor
from app.services.logging_service import logging_service
from app.services.pade_chebyshev import build_linear_cross, build_linear_integral, build_nonlinear, series_input
from app.utils.report_format import coefficient_block, coefficient_text, rows_text, text_block


@dataclass
class JobResult:
    """Everything a front end needs to emit for one job"""

    document: Dict[str, Any]
    text: str
    curve: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = None
    approximant: Optional[RationalApproximant] = None
    extras: Dict[str, Any] = field(default_factory=dict)


def _settings(overrides: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    settings = settings_manager.get_all_settings()
    if overrides:
        settings.update(overrides)
    return settings


def resolve_target(spec: JobSpec) -> TargetFunction:
    """TargetFunction named by the job's function source"""
    domain = Domain(spec.a, spec.b) if spec.a is not None else None
    if spec.fn is not None:
        return catalog.builtin(spec.fn, spec.k, domain)
    if spec.taylor is not None:
        return catalog.from_taylor(spec.taylor, domain, spec.name or 'taylor')
    if spec.chebyshev is not None:
        return catalog.from_chebyshev(spec.chebyshev, domain, spec.name or 'chebyshev')
    if spec.samples is not None:
        return modeling.spline_fit(sample_table(spec), spec.spline, spec.bc)
    raise UsageError("The job has no function source")


def sample_table(spec: JobSpec) -> SampleTable:
    return SampleTable.from_points(spec.samples, name=spec.name or 'samples')


def build_options(spec: JobSpec, target: Optional[TargetFunction], settings: Dict[str, Any]) -> BuildOptions:
    parity = spec.parity or (target.parity_hint if target is not None else None) or PLAIN
    return BuildOptions(
        normalization=spec.normalization,
        parity_form=parity,
        quadrature_nodes=spec.quadrature_nodes or int(settings['quadrature_nodes']),
        checkpoints=spec.checkpoints or int(settings['checkpoints']),
        weight=spec.weight,
        matrix_noise=spec.noise,
        noise_seed=spec.noise_seed
    )


def construct(spec: JobSpec, f: TargetFunction, opts: BuildOptions,
              settings: Dict[str, Any]) -> Tuple[RationalApproximant, ApproxReport, Optional[RemezState]]:
    """Build the approximant of an approx/report job with its error report"""
    m, n = spec.m, spec.n
    weight = Weight(opts.weight)
    state = None

    if spec.method == 'pc-linear':
        outcome = build_linear_integral(f, m, n, opts)
        return outcome.approximant, outcome.report, None

    if spec.method in ('pc-cross', 'pc-nonlinear'):
        builder = build_linear_cross if spec.method == 'pc-cross' else build_nonlinear
        r = builder(series_input(f, m, n, opts.parity_form, opts.quadrature_nodes), m, n,
                    opts.parity_form, f.domain)
    elif spec.method == 'pade':
        r = pade_from_taylor(f.taylor(m + n + 1), m, n, f.domain, opts.matrix_noise, opts.noise_seed)
    else:
        init = None
        if spec.seed == 'pc-linear':
            seed = build_linear_integral(f, m, n, opts).approximant
            init = remez.seed_from_approximant(seed, f, weight)
        r, state = remez.remez_solve(
            f, m, n, weight, init, opts.parity_form,
            tolerance=spec.tolerance or float(settings['remez_tolerance']),
            max_cycles=spec.max_cycles or int(settings['remez_max_cycles']),
            max_inner=int(settings['remez_max_inner']),
            grid_points=opts.checkpoints
        )

    report = analysis.error_report(f, r, weight, opts.checkpoints)
    return r, report, state


def _approx(spec: JobSpec, settings: Dict[str, Any]) -> JobResult:
    f = resolve_target(spec)
    opts = build_options(spec, f, settings)
    r, report, state = construct(spec, f, opts, settings)

    document = {
        'job': spec.to_dict(),
        'target': f.describe(),
        'approximant': coefficient_block(r),
        'report': report.to_dict()
    }
    if state is not None:
        document['remez'] = state.to_dict()
    text = '\n\n'.join([coefficient_text(r), text_block(report, f"Error report ({spec.method})")])

    return JobResult(document, text, analysis.error_curve(f, r, opts.checkpoints), r)


def perturbation_for(spec: JobSpec) -> autocorrection.Perturbation:
    if spec.n1 is not None:
        return autocorrection.TaylorTruncation(spec.n1, spec.n2)
    if spec.nodes2 is not None:
        return autocorrection.NodeCountChange(spec.nodes2)
    if spec.normalization2 is not None:
        return autocorrection.NormalizationSwitch(spec.normalization2)
    level = 1e-12 if spec.level is None else spec.level
    return autocorrection.CoefficientNoise(level, spec.noise_seed or 1)


def _autocorrect(spec: JobSpec, settings: Dict[str, Any]) -> JobResult:
    f = resolve_target(spec)
    opts = build_options(spec, f, settings)

    if spec.sweep is not None:
        sweep = autocorrection.truncation_sweep(f, spec.m, spec.n, spec.sweep, opts.parity_form,
                                                spec.method, opts.checkpoints)
        text = '\n\n'.join([
            rows_text(sweep['rows'], ('N', 'abs_error', 'rel_error', 'condition')),
            rows_text(sweep['pairs'], ('N1', 'N2', 'coeff_rel_error', 'error_approximant_error'))
        ])
        return JobResult({'job': spec.to_dict(), 'target': f.describe(), 'sweep': sweep}, text)

    perturbation = perturbation_for(spec)
    record = autocorrection.autocorrection_experiment(f, spec.m, spec.n, opts, perturbation, spec.method)
    payload = record.to_dict()
    lines = [f"Autocorrection experiment ({spec.method}, {record.perturbation})"]
    for key in ('coeff_rel_error', 'approximant_error_r1', 'approximant_error_r2',
                'error_approximant_error', 'cond'):
        value = payload[key]
        lines.append(f"  {key:<24s} {'n/a' if value is None else format(value, '.6e')}")
    if record.excluded_zones:
        lines.append(f"  excluded zones           {len(record.excluded_zones)}")
    if record.degenerate:
        lines.append("  error approximant is degenerate")
    return JobResult({'job': spec.to_dict(), 'target': f.describe(), 'experiment': payload}, '\n'.join(lines))


def _elemfun(spec: JobSpec, settings: Dict[str, Any]) -> JobResult:
    precisions = PRECISIONS if spec.precision == 'both' else (spec.precision,)

    if spec.x is not None:
        values = {p: elemfun.evaluate(spec.function, spec.x, p, spec.form, spec.exponent) for p in precisions}
        text = '\n'.join(f"{spec.function}({spec.x!r}) [{p}] = {v!r}" for p, v in values.items())
        return JobResult({'job': spec.to_dict(), 'values': values}, text)

    records = [elemfun.accuracy_harness(spec.function, p, spec.grid, spec.form) for p in precisions]
    rows: List[Dict[str, Any]] = [r.to_dict() for r in records]
    text = rows_text(rows, ('function', 'precision', 'abs_error', 'rel_error', 'mean_abs_error', 'mean_rel_error'))
    return JobResult({'job': spec.to_dict(), 'harness': rows}, text)


def _model(spec: JobSpec, settings: Dict[str, Any]) -> JobResult:
    table = sample_table(spec)
    reference = catalog.builtin(spec.reference, spec.k) if spec.reference else None
    opts = build_options(spec, None, settings)
    outcome = modeling.fit_model(table, spec.m, spec.n, spec.spline, opts, reference, spec.bc)

    document = {
        'job': spec.to_dict(),
        'samples': {'points': table.size, 'domain': table.domain.to_dict()},
        'approximant': coefficient_block(outcome.approximant),
        'report': outcome.report.to_dict()
    }
    truth = reference.with_domain(table.domain) if reference is not None else \
        modeling.spline_fit(table, spec.spline, spec.bc)
    curve = analysis.error_curve(truth, outcome.approximant, opts.checkpoints)
    title = f"Model error against {'the reference' if reference is not None else 'the spline'}"
    text = '\n\n'.join([coefficient_text(outcome.approximant), text_block(outcome.report, title)])
    return JobResult(document, text, curve, outcome.approximant)


def _accelerate(spec: JobSpec, settings: Dict[str, Any]) -> JobResult:
    f = resolve_target(spec)
    opts = build_options(spec, f, settings)
    record = analysis.acceleration_compare(f, spec.m, spec.n, opts.parity_form, opts.checkpoints,
                                           opts.quadrature_nodes)
    text = (f"Partial sum of degree {record.poly_degree}: {record.poly_error:.6e}\n"
            f"Rational approximant m={spec.m} n={spec.n}: {record.rational_error:.6e}")
    return JobResult({'job': spec.to_dict(), 'target': f.describe(), 'acceleration': record.to_dict()}, text)


HANDLERS = {
    'approx': _approx,
    'report': _approx,
    'autocorrect': _autocorrect,
    'elemfun-check': _elemfun,
    'model': _model,
    'accelerate': _accelerate
}


def run_job(spec: JobSpec, settings: Optional[Dict[str, Any]] = None) -> JobResult:
    """Validate and run one job

    Raises:
        UsageError: invalid job
        WorkbenchError: construction or evaluation failures from the services
    """
    spec.validate()
    logging_service.info(f"Running {spec.command} job", 'job')
    return HANDLERS[spec.command](spec, _settings(settings))
