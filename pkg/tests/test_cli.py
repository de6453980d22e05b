"""
Tests for the command-line front end
"""

import json
import math

import numpy as np
import pytest

from app.cli import run


@pytest.fixture
def config_path(tmp_path, monkeypatch):
    for variable in ('RATAPPROX_CHECKPOINTS', 'RATAPPROX_QUADRATURE_NODES', 'RATAPPROX_OUTPUT_DIR', 'LOG_DIR'):
        monkeypatch.delenv(variable, raising=False)
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'checkpoints': 400, 'output_dir': str(tmp_path / 'out')}))
    return str(path)


@pytest.fixture
def workbench(config_path):
    """Run the CLI against the private settings file"""
    def invoke(*argv):
        return run(['--config', config_path, *argv])
    return invoke


def json_output(capsys):
    return json.loads(capsys.readouterr().out)


class TestExitCodes:
    def test_help(self, capsys):
        assert run(['--help']) == 0
        assert 'approx' in capsys.readouterr().out

    def test_unknown_subcommand(self, capsys):
        assert run(['interpolate']) == 2

    def test_bad_option_value(self, workbench):
        assert workbench('approx', '--fn', 'exp', '--m', 'two') == 2

    def test_empty_domain(self, workbench, capsys):
        assert workbench('approx', '--fn', 'exp', '--a', '1', '--b', '1') == 2
        assert 'a < b' in capsys.readouterr().err

    def test_two_sources(self, workbench, tmp_path):
        taylor = tmp_path / 'exp.txt'
        taylor.write_text('1\n1\n0.5\n')
        assert workbench('approx', '--fn', 'exp', '--taylor-file', str(taylor)) == 2

    def test_missing_input_file(self, workbench, tmp_path):
        assert workbench('approx', '--taylor-file', str(tmp_path / 'absent.txt')) == 2

    def test_unknown_function(self, workbench):
        assert workbench('approx', '--fn', 'gamma', '--m', '1', '--n', '1') == 2

    def test_degenerate_pade(self, workbench, tmp_path, capsys):
        taylor = tmp_path / 'even.txt'
        taylor.write_text('1\n0\n1\n0\n')
        code = workbench('approx', '--taylor-file', str(taylor), '--method', 'pade', '--m', '1', '--n', '1')
        assert code == 3
        assert capsys.readouterr().err.startswith('error:')

    def test_evaluation_failure(self, workbench):
        assert workbench('elemfun-check', '--function', 'lg', '--x', '-1') == 4


class TestApprox:
    def test_text_report(self, workbench, capsys):
        assert workbench('approx', '--fn', 'exp', '--m', '2', '--n', '2') == 0
        out = capsys.readouterr().out
        assert 'Approximant m=2 n=2 (plain)' in out
        assert 'Error report (pc-linear)' in out

    def test_json_to_stdout(self, workbench, capsys):
        assert workbench('approx', '--fn', 'exp', '--m', '2', '--n', '2', '--method', 'pade', '--json', '-') == 0
        payload = json_output(capsys)
        assert payload['job']['method'] == 'pade'
        assert payload['report']['checkpoints'] == 400
        assert payload['report']['abs_error'] == pytest.approx(4.0e-3, rel=0.1)

    def test_json_is_deterministic(self, workbench, tmp_path):
        first, second = tmp_path / 'first.json', tmp_path / 'second.json'
        argv = ('approx', '--fn', 'cos', '--m', '2', '--n', '2', '--quiet')
        assert workbench(*argv, '--json', str(first)) == 0
        assert workbench(*argv, '--json', str(second)) == 0
        assert first.read_text() == second.read_text()
        assert json.loads(first.read_text())['approximant']['parity'] == 'even'

    def test_taylor_file(self, workbench, tmp_path, capsys):
        taylor = tmp_path / 'exp_series.txt'
        taylor.write_text('\n'.join(repr(1.0 / math.factorial(i)) for i in range(12)) + '\n')
        assert workbench('approx', '--taylor-file', str(taylor), '--m', '2', '--n', '2', '--json', '-') == 0
        payload = json_output(capsys)
        assert payload['target']['name'] == 'exp_series'
        assert payload['report']['abs_error'] < 1e-3

    def test_curve_option(self, workbench, tmp_path):
        curve = tmp_path / 'exp.dat'
        assert workbench('approx', '--fn', 'exp', '--m', '1', '--n', '1', '--quiet', '--curve', str(curve)) == 0
        data = np.loadtxt(curve)
        assert data.shape == (400, 3)


class TestReport:
    def test_default_curve_file(self, workbench, tmp_path):
        assert workbench('report', '--fn', 'exp', '--m', '1', '--n', '1', '--quiet') == 0
        curve = tmp_path / 'out' / 'exp-curve.dat'
        assert curve.exists()
        lines = curve.read_text().splitlines()
        assert lines[0] == '# x abs_error rel_error'
        assert len(lines) == 401


class TestOtherCommands:
    def test_autocorrect(self, workbench, capsys):
        assert workbench('autocorrect', '--fn', 'exp', '--m', '2', '--n', '2', '--json', '-') == 0
        experiment = json_output(capsys)['experiment']
        assert experiment['perturbation'] == 'coefficient noise 1e-12 (seed 1)'

    def test_elemfun_value(self, workbench, capsys):
        assert workbench('elemfun-check', '--function', 'sin', '--x', '0.5', '--json', '-') == 0
        values = json_output(capsys)['values']
        assert values['enhanced'] == pytest.approx(math.sin(0.5), rel=1e-12)

    def test_elemfun_harness(self, workbench, capsys):
        assert workbench('elemfun-check', '--function', 'atan', '--precision', 'ordinary', '--grid', '1000') == 0
        assert 'atan' in capsys.readouterr().out

    def test_model(self, workbench, tmp_path, capsys):
        samples = tmp_path / 'cos.dat'
        xs = np.linspace(-1.0, 1.0, 32)
        samples.write_text('# x y\n' + ''.join(f"{float(x)!r} {math.cos(x)!r}\n" for x in xs))
        code = workbench('model', '--samples-file', str(samples), '--m', '2', '--n', '2', '--even',
                         '--reference', 'cos', '--json', '-')
        assert code == 0
        payload = json_output(capsys)
        assert payload['samples']['points'] == 32
        assert payload['report']['abs_error'] < 1e-5

    def test_accelerate(self, workbench, capsys):
        assert workbench('accelerate', '--fn', 'exp', '--m', '1', '--n', '1') == 0
        assert 'Partial sum of degree 3' in capsys.readouterr().out


class TestConfigCommand:
    def test_init_and_show(self, config_path, tmp_path, capsys):
        path = tmp_path / 'fresh' / 'config.json'
        assert run(['--config', str(path), 'config', '--init']) == 0
        assert path.exists()
        assert '_comment' in json.loads(path.read_text())
        capsys.readouterr()
        assert run(['--config', str(path), 'config', '--show']) == 0
        shown = json_output(capsys)
        assert shown['quadrature_nodes'] == 128
        assert '_comment' not in shown

    def test_show_reads_the_file(self, workbench, capsys):
        assert workbench('config', '--show') == 0
        assert json_output(capsys)['checkpoints'] == 400
