"""
Command-line front end of the Rational Approximation Workbench
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.core.config import SettingsManager, settings_manager
from app.core.exceptions import UsageError, WorkbenchError
from app.models.jobs import APPROX_METHODS, AUTOCORRECT_METHODS, JobSpec
from app.services.job_service import JobResult, run_job
from app.services.logging_service import logging_service
from app.utils.coefficient_files import read_coefficient_list, read_sample_table
from app.utils.report_format import document, write_curve

EXIT_OK = 0
EXIT_USAGE = 2

SAMPLES_HELP = (
    "Sample table: two whitespace-separated columns x y per line ('#' starts a comment), "
    "or JSON {\"points\": [[x, y], ...]} or {\"x\": [...], \"y\": [...]}"
)


def _add_output(parser: argparse.ArgumentParser, curve: bool = True):
    parser.add_argument('--json', metavar='PATH', help="Write the machine-readable report ('-' for stdout)")
    if curve:
        parser.add_argument('--curve', metavar='PATH', help='Write the error curve (x, abs error, rel error)')
    parser.add_argument('--quiet', action='store_true', help='Do not print the text report')


def _add_build(parser: argparse.ArgumentParser):
    parser.add_argument('--m', type=int, default=0, help='Denominator degree (of the parity form)')
    parser.add_argument('--n', type=int, default=0, help='Numerator degree (of the parity form)')
    parity = parser.add_mutually_exclusive_group()
    parity.add_argument('--plain', dest='parity', action='store_const', const='plain')
    parity.add_argument('--even', dest='parity', action='store_const', const='even',
                        help='Even form P(x^2)/Q(x^2)')
    parity.add_argument('--odd', dest='parity', action='store_const', const='odd',
                        help='Odd form x P(x^2)/Q(x^2)')
    parser.add_argument('--normalization', default='b0', choices=('b0', 'bm', 'an'))
    parser.add_argument('--weight', default='absolute', choices=('absolute', 'relative'))
    parser.add_argument('--nodes', dest='quadrature_nodes', type=int, help='Gauss-Chebyshev nodes')
    parser.add_argument('--checkpoints', type=int, help='Error-curve grid size')
    parser.add_argument('--noise', type=float, default=0.0, help='Relative noise on the defining system')
    parser.add_argument('--noise-seed', type=int, default=0)


def _add_target(parser: argparse.ArgumentParser):
    source = parser.add_argument_group('function source (exactly one)')
    source.add_argument('--fn', help='Built-in function name')
    source.add_argument('--k', type=float, help='Divisor k of the scaled functions f(pi*x/k)')
    source.add_argument('--taylor-file', help='Taylor coefficients about 0, one per line')
    source.add_argument('--cheb-file', help='Chebyshev coefficients on the domain, one per line')
    source.add_argument('--samples-file', help=SAMPLES_HELP)
    source.add_argument('--spline', default='cubic', choices=('linear', 'cubic'))
    source.add_argument('--bc', default='not-a-knot', choices=('not-a-knot', 'natural'),
                        help='Cubic spline boundary condition')
    parser.add_argument('--a', type=float, help='Left end of the domain')
    parser.add_argument('--b', type=float, help='Right end of the domain')
    parser.add_argument('--name', help='Display name of the target')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='workbench', description='Rational approximation workbench')
    parser.add_argument('--config', default='config/config.json', help='Settings file')
    commands = parser.add_subparsers(dest='command', required=True)

    for name, description in (('approx', 'Build an approximant'),
                              ('report', 'Build an approximant and write its error curve')):
        command = commands.add_parser(name, help=description)
        _add_target(command)
        _add_build(command)
        command.add_argument('--method', default='pc-linear', choices=APPROX_METHODS)
        command.add_argument('--tolerance', type=float, help='Remez exit tolerance')
        command.add_argument('--max-cycles', type=int, help='Remez cycle cap')
        command.add_argument('--seed', default='default', choices=('default', 'pc-linear'),
                             help='Remez starting points')
        _add_output(command)

    command = commands.add_parser('autocorrect', help='Build twice under a perturbation')
    _add_target(command)
    _add_build(command)
    command.add_argument('--method', default='pc-linear', choices=AUTOCORRECT_METHODS)
    command.add_argument('--N1', dest='n1', type=int, help='First Taylor truncation')
    command.add_argument('--N2', dest='n2', type=int, help='Second Taylor truncation')
    command.add_argument('--nodes2', type=int, help='Quadrature nodes of the second build')
    command.add_argument('--normalization2', choices=('b0', 'bm', 'an'),
                         help='Normalization of the second build')
    command.add_argument('--level', type=float, help='Coefficient noise of the second build')
    command.add_argument('--sweep', type=int, nargs='+', metavar='N', help='Taylor truncation sweep')
    _add_output(command, curve=False)

    command = commands.add_parser('elemfun-check', help='Elementary function values and accuracy')
    command.add_argument('--function', required=True)
    command.add_argument('--precision', default='both', choices=('ordinary', 'enhanced', 'both'))
    command.add_argument('--form', default='kernel', choices=('kernel', 'jacobi'))
    command.add_argument('--grid', type=int, default=10000)
    command.add_argument('--x', type=float, help='Evaluate at one argument instead of the harness')
    command.add_argument('--exponent', type=float, help='Exponent of pow')
    _add_output(command, curve=False)

    command = commands.add_parser('model', help='Spline the samples, then model the spline')
    command.add_argument('--samples-file', required=True, help=SAMPLES_HELP)
    command.add_argument('--spline', default='cubic', choices=('linear', 'cubic'))
    command.add_argument('--bc', default='not-a-knot', choices=('not-a-knot', 'natural'))
    command.add_argument('--reference', help='Built-in function to measure the model against')
    command.add_argument('--k', type=float, help='Divisor k of a scaled reference')
    command.add_argument('--name')
    _add_build(command)
    _add_output(command)

    command = commands.add_parser('accelerate', help='Partial Chebyshev sum against the rational approximant')
    _add_target(command)
    _add_build(command)
    _add_output(command, curve=False)

    command = commands.add_parser('serve', help='Start the HTTP API')
    command.add_argument('--host', default='127.0.0.1')
    command.add_argument('--port', type=int, default=5000)
    command.add_argument('--debug', action='store_true')

    command = commands.add_parser('config', help='Settings file helpers')
    action = command.add_mutually_exclusive_group(required=True)
    action.add_argument('--init', action='store_true', help='Write an example settings file')
    action.add_argument('--show', action='store_true', help='Print the effective settings')
    return parser


JOB_FIELDS = (
    'fn', 'k', 'spline', 'bc', 'a', 'b', 'm', 'n', 'method', 'parity', 'normalization', 'weight',
    'quadrature_nodes', 'checkpoints', 'noise', 'noise_seed', 'level', 'nodes2', 'normalization2',
    'n1', 'n2', 'sweep', 'tolerance', 'max_cycles', 'seed', 'function', 'precision', 'grid', 'form',
    'x', 'exponent', 'reference', 'name'
)


def job_from_args(args: argparse.Namespace) -> JobSpec:
    """JobSpec of a parsed command line, with input files read in"""
    payload = {'command': args.command}
    for key in JOB_FIELDS:
        if hasattr(args, key):
            payload[key] = getattr(args, key)
    if args.command == 'model':
        payload.pop('fn', None)

    taylor_file = getattr(args, 'taylor_file', None)
    cheb_file = getattr(args, 'cheb_file', None)
    samples_file = getattr(args, 'samples_file', None)
    try:
        if taylor_file:
            payload['taylor'] = read_coefficient_list(taylor_file)
        if cheb_file:
            payload['chebyshev'] = read_coefficient_list(cheb_file)
        if samples_file:
            table = read_sample_table(samples_file)
            payload['samples'] = [[float(x), float(y)] for x, y in zip(table.x, table.y)]
    except (OSError, ValueError) as e:
        raise UsageError(f"Cannot read input: {e}") from e
    for path in (taylor_file, cheb_file, samples_file):
        if path and not payload.get('name'):
            payload['name'] = Path(path).stem

    spec = JobSpec(**{key: value for key, value in payload.items() if value is not None})
    return spec.validate()


def emit(result: JobResult, args: argparse.Namespace, settings: SettingsManager) -> None:
    json_path = getattr(args, 'json', None)
    rendered = document(**result.document)
    if json_path == '-':
        sys.stdout.write(rendered)
    elif json_path:
        path = Path(json_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(rendered, encoding='utf-8')

    curve_path = getattr(args, 'curve', None)
    if curve_path is None and args.command == 'report':
        name = (args.name or args.fn or 'target').replace('/', '_')
        curve_path = str(Path(settings.get_setting('output_dir', 'output')) / f"{name}-curve.dat")
    if curve_path and result.curve is not None:
        written = write_curve(curve_path, *result.curve)
        logging_service.info(f"Error curve written to {written}", 'cli')

    if not getattr(args, 'quiet', False) and json_path != '-':
        print(result.text)


def _serve(args: argparse.Namespace) -> int:
    from app import create_app

    app = create_app()
    app.run(host=args.host, port=args.port, debug=args.debug)
    return EXIT_OK


def _config(args: argparse.Namespace, settings: SettingsManager) -> int:
    if args.init:
        if not settings.create_example_config():
            print(f"Could not write {settings.config_file}", file=sys.stderr)
            return EXIT_USAGE
        print(f"Example settings written to {settings.config_file}")
        return EXIT_OK
    print(document(**settings.get_all_settings()), end='')
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, validate, dispatch; returns the process exit status

    0 success, 2 usage error, 3 construction failure, 4 evaluation failure.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    settings = settings_manager if args.config == str(settings_manager.config_file) else SettingsManager(args.config)
    if settings.get_setting('log_to_file'):
        logging_service.configure(log_dir=settings.get_setting('log_dir'))

    if args.command == 'serve':
        return _serve(args)
    if args.command == 'config':
        return _config(args, settings)

    try:
        spec = job_from_args(args)
        result = run_job(spec, settings.get_all_settings())
        emit(result, args, settings)
    except WorkbenchError as e:
        logging_service.error(f"{args.command} failed: {e}", 'cli')
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, OSError) as e:
        logging_service.error(f"{args.command} rejected: {e}", 'cli')
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main(argv: Optional[List[str]] = None):
    sys.exit(run(argv))
