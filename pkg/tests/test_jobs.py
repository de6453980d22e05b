"""
Tests for job specifications and the job service
"""

import math

import numpy as np
import pytest

from app.core.exceptions import DegeneratePadeError, ElemfunDomainError, UsageError
from app.models.jobs import JobSpec
from app.services import autocorrection
from app.services.job_service import build_options, perturbation_for, resolve_target, run_job

FAST = {'checkpoints': 400}


def cos_samples(count=32):
    xs = np.linspace(-1.0, 1.0, count)
    return [[float(x), float(math.cos(x))] for x in xs]


class TestJobSpecParsing:
    def test_from_dict(self):
        spec = JobSpec.from_dict({'command': 'approx', 'fn': 'exp', 'm': 2, 'n': 2})
        assert (spec.fn, spec.m, spec.n, spec.method) == ('exp', 2, 2, 'pc-linear')

    def test_unknown_field(self):
        with pytest.raises(UsageError, match='Unknown job field'):
            JobSpec.from_dict({'command': 'approx', 'fn': 'exp', 'degree': 3})

    def test_missing_command(self):
        with pytest.raises(UsageError, match='command'):
            JobSpec.from_dict({'fn': 'exp'})

    def test_not_an_object(self):
        with pytest.raises(UsageError):
            JobSpec.from_dict(['approx'])

    def test_to_dict_drops_unset_fields(self):
        payload = JobSpec('approx', fn='exp').to_dict()
        assert payload['fn'] == 'exp'
        assert 'taylor' not in payload
        assert 'x' not in payload


class TestJobSpecValidation:
    @pytest.mark.parametrize('payload', [
        {'command': 'solve', 'fn': 'exp'},
        {'command': 'approx', 'fn': 'exp', 'a': 1.0, 'b': 1.0},
        {'command': 'approx', 'fn': 'exp', 'a': 2.0, 'b': 1.0},
        {'command': 'approx', 'fn': 'exp', 'a': 0.0},
        {'command': 'approx'},
        {'command': 'approx', 'fn': 'exp', 'taylor': [1.0, 1.0]},
        {'command': 'approx', 'fn': 'exp', 'm': -1},
        {'command': 'approx', 'fn': 'exp', 'm': True},
        {'command': 'approx', 'fn': 'exp', 'm': 1.5},
        {'command': 'approx', 'fn': 'exp', 'quadrature_nodes': 0},
        {'command': 'approx', 'fn': 'exp', 'method': 'simplex'},
        {'command': 'approx', 'fn': 'exp', 'parity': 'triangular'},
        {'command': 'approx', 'fn': 'exp', 'normalization': 'b1'},
        {'command': 'approx', 'fn': 'exp', 'weight': 'uniform'},
        {'command': 'approx', 'fn': 'exp', 'noise': -1e-9},
        {'command': 'approx', 'fn': 'cos', 'method': 'pade', 'parity': 'even'},
        {'command': 'approx', 'fn': 'exp', 'method': 'remez', 'seed': 'random'},
        {'command': 'approx', 'samples': [[0.0, 1.0], [1.0, 2.0]], 'a': 0.0, 'b': 1.0},
        {'command': 'approx', 'samples': [[0.0, 1.0], [1.0, 2.0]], 'spline': 'quintic'},
        {'command': 'model', 'fn': 'exp'},
        {'command': 'elemfun-check'},
        {'command': 'elemfun-check', 'function': 'sin', 'precision': 'quad'},
        {'command': 'elemfun-check', 'function': 'sin', 'form': 'continued'},
        {'command': 'elemfun-check', 'function': 'sin', 'grid': 999},
        {'command': 'autocorrect', 'fn': 'exp', 'method': 'remez'},
        {'command': 'autocorrect', 'fn': 'exp', 'n1': 10},
        {'command': 'autocorrect', 'fn': 'exp', 'n1': 10, 'n2': 12},
        {'command': 'autocorrect', 'fn': 'exp', 'method': 'pade', 'nodes2': 64},
        {'command': 'autocorrect', 'fn': 'exp', 'method': 'pc-cross', 'normalization2': 'bm'},
        {'command': 'autocorrect', 'fn': 'exp', 'normalization2': 'b7'},
        {'command': 'autocorrect', 'fn': 'exp', 'sweep': [15, 20]},
        {'command': 'autocorrect', 'fn': 'exp', 'method': 'pc-cross', 'sweep': [15]},
        {'command': 'autocorrect', 'fn': 'exp', 'level': -1.0}
    ])
    def test_rejected(self, payload):
        with pytest.raises(UsageError):
            JobSpec.from_dict(payload)

    @pytest.mark.parametrize('payload', [
        {'command': 'approx', 'fn': 'exp', 'a': 0.0, 'b': 2.0},
        {'command': 'report', 'taylor': [1.0, 1.0, 0.5], 'method': 'pade', 'm': 1, 'n': 1},
        {'command': 'model', 'samples': [[0.0, 1.0], [1.0, 2.0]], 'spline': 'linear'},
        {'command': 'elemfun-check', 'function': 'sin', 'x': 0.5, 'grid': 10},
        {'command': 'autocorrect', 'fn': 'tan', 'method': 'pc-cross', 'n1': 15, 'n2': 20},
        {'command': 'autocorrect', 'fn': 'tan', 'method': 'pc-nonlinear', 'sweep': [15, 20]},
        {'command': 'accelerate', 'chebyshev': [1.0, 0.5, 0.25]}
    ])
    def test_accepted(self, payload):
        assert JobSpec.from_dict(payload).command == payload['command']


class TestResolution:
    def test_builtin_with_domain(self):
        f = resolve_target(JobSpec('approx', fn='exp', a=0.0, b=2.0))
        assert (f.name, f.domain.a, f.domain.b) == ('exp', 0.0, 2.0)

    def test_taylor_and_chebyshev_sources(self):
        f = resolve_target(JobSpec('approx', taylor=[1.0, 2.0]))
        assert f.name == 'taylor'
        assert f(np.array([0.5]))[0] == pytest.approx(2.0)
        g = resolve_target(JobSpec('approx', chebyshev=[1.0, 0.5], name='line'))
        assert g.name == 'line'
        assert g(np.array([1.0]))[0] == pytest.approx(1.5)

    def test_samples_become_a_spline(self):
        f = resolve_target(JobSpec('approx', samples=cos_samples()))
        assert f.name == 'samples-cubic'
        assert (f.domain.a, f.domain.b) == (-1.0, 1.0)

    def test_parity_follows_the_target(self):
        spec = JobSpec('approx', fn='cos')
        opts = build_options(spec, resolve_target(spec), {'quadrature_nodes': 64, 'checkpoints': 300})
        assert opts.parity_form == 'even'
        assert (opts.quadrature_nodes, opts.checkpoints) == (64, 300)
        spec = JobSpec('approx', fn='cos', parity='plain', quadrature_nodes=32)
        opts = build_options(spec, resolve_target(spec), {'quadrature_nodes': 64, 'checkpoints': 300})
        assert (opts.parity_form, opts.quadrature_nodes) == ('plain', 32)

    def test_perturbations(self):
        assert perturbation_for(JobSpec('autocorrect', n1=15, n2=20)) == autocorrection.TaylorTruncation(15, 20)
        assert perturbation_for(JobSpec('autocorrect', nodes2=64)) == autocorrection.NodeCountChange(64)
        assert perturbation_for(JobSpec('autocorrect', normalization2='bm')) == \
            autocorrection.NormalizationSwitch('bm')
        assert perturbation_for(JobSpec('autocorrect')) == autocorrection.CoefficientNoise(1e-12, 1)
        assert perturbation_for(JobSpec('autocorrect', level=1e-9, noise_seed=7)) == \
            autocorrection.CoefficientNoise(1e-9, 7)


class TestRunJob:
    def test_approx_document(self):
        result = run_job(JobSpec('approx', fn='exp', m=2, n=2), FAST)
        assert set(result.document) == {'job', 'target', 'approximant', 'report'}
        assert result.document['report']['checkpoints'] == 400
        assert result.document['approximant']['b0']['denominator'][0] == 1.0
        xs, abs_err, rel_err = result.curve
        assert len(xs) == len(abs_err) == len(rel_err) == 400
        assert 'Error report (pc-linear)' in result.text

    def test_pade_exp(self):
        result = run_job(JobSpec('approx', fn='exp', m=2, n=2, method='pade'), FAST)
        assert result.document['report']['abs_error'] == pytest.approx(4.0e-3, rel=0.1)

    def test_remez_document(self):
        result = run_job(JobSpec('approx', fn='exp', m=2, n=2, method='remez', seed='pc-linear'), FAST)
        assert 'remez' in result.document
        assert result.document['report']['abs_error'] < 1e-3

    def test_degenerate_pade(self):
        with pytest.raises(DegeneratePadeError):
            run_job(JobSpec('approx', taylor=[1.0, 0.0, 1.0, 0.0], m=1, n=1, method='pade'), FAST)

    def test_autocorrect_default_noise(self):
        result = run_job(JobSpec('autocorrect', fn='exp', m=2, n=2), FAST)
        experiment = result.document['experiment']
        assert experiment['perturbation'] == 'coefficient noise 1e-12 (seed 1)'
        assert experiment['coeff_rel_error'] >= 0.0
        assert result.text.startswith('Autocorrection experiment (pc-linear')

    def test_autocorrect_sweep(self):
        result = run_job(JobSpec('autocorrect', fn='tan-scaled', k=4, m=3, n=3, method='pc-nonlinear',
                                 sweep=[15, 20]), FAST)
        sweep = result.document['sweep']
        assert [row['N'] for row in sweep['rows']] == [15, 20]
        assert [(p['N1'], p['N2']) for p in sweep['pairs']] == [(15, 20)]
        assert result.curve is None

    def test_elemfun_values(self):
        result = run_job(JobSpec('elemfun-check', function='sin', x=0.5))
        values = result.document['values']
        assert set(values) == {'ordinary', 'enhanced'}
        assert values['enhanced'] == pytest.approx(math.sin(0.5), rel=1e-12)

    def test_elemfun_domain_error(self):
        with pytest.raises(ElemfunDomainError):
            run_job(JobSpec('elemfun-check', function='lg', x=-1.0, precision='ordinary'))

    def test_elemfun_harness(self):
        result = run_job(JobSpec('elemfun-check', function='atan', precision='ordinary', grid=1000))
        rows = result.document['harness']
        assert len(rows) == 1
        assert (rows[0]['function'], rows[0]['precision'], rows[0]['grid']) == ('atan', 'ordinary', 1000)

    def test_model_against_reference(self):
        result = run_job(JobSpec('model', samples=cos_samples(), m=2, n=2, parity='even', reference='cos'), FAST)
        assert result.document['samples'] == {'points': 32, 'domain': {'a': -1.0, 'b': 1.0}}
        assert result.document['report']['abs_error'] < 1e-5
        assert len(result.curve[0]) == 400

    def test_accelerate(self):
        result = run_job(JobSpec('accelerate', fn='exp', m=1, n=1), FAST)
        record = result.document['acceleration']
        assert record['poly_degree'] == 3
        assert record['poly_error'] > 0.0
        assert 'Partial sum of degree 3' in result.text

    def test_invalid_job_is_rejected_before_running(self):
        with pytest.raises(UsageError):
            run_job(JobSpec('approx', fn='exp', m=-2))
