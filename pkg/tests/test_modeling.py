"""
Tests for spline interpolation of sampled data and the rational model built on it
"""

import math

import numpy as np
import pytest

from app.core.exceptions import EvaluationError
from app.models.reports import BuildOptions
from app.models.target import SampleTable
from app.services import catalog
from app.services.modeling import fit_model, spline_fit


@pytest.fixture
def cos_samples():
    """32 uniform samples of cos on [-pi/4, pi/4]"""
    x = np.linspace(-math.pi / 4, math.pi / 4, 32)
    return SampleTable(x, np.cos(x), name='cos32')


@pytest.fixture
def even_options():
    return BuildOptions(parity_form='even')


class TestSplineFit:
    @pytest.mark.parametrize('kind', ['linear', 'cubic'])
    def test_passes_through_the_knots(self, cos_samples, kind):
        spline = spline_fit(cos_samples, kind)
        assert np.allclose(spline(cos_samples.x), cos_samples.y, rtol=0, atol=1e-12)

    def test_two_points_give_a_line(self):
        spline = spline_fit(SampleTable([0.0, 2.0], [1.0, 5.0]), 'linear')
        assert spline(np.array([0.5, 1.0]))[1] == pytest.approx(3.0)
        assert spline(np.array([0.5]))[0] == pytest.approx(2.0)

    def test_not_a_knot_reproduces_cubics(self):
        x = np.linspace(-1.0, 2.0, 8)
        spline = spline_fit(SampleTable(x, x ** 3 - x), 'cubic')
        points = np.array([-0.9, 0.33, 1.7])
        assert np.allclose(spline(points), points ** 3 - points, atol=1e-12)

    def test_cubic_accuracy_on_cos(self, cos_samples):
        spline = spline_fit(cos_samples, 'cubic')
        xs = np.linspace(-math.pi / 4, math.pi / 4, 2001)
        assert np.max(np.abs(spline(xs) - np.cos(xs))) <= 1e-6

    def test_natural_boundary(self, cos_samples):
        spline = spline_fit(cos_samples, 'cubic', 'natural')
        assert spline.parameters == {'spline': 'cubic', 'points': 32, 'bc': 'natural'}
        assert np.allclose(spline(cos_samples.x), cos_samples.y, atol=1e-12)

    def test_no_extrapolation(self, cos_samples):
        spline = spline_fit(cos_samples, 'cubic')
        with pytest.raises(EvaluationError):
            spline(np.array([1.0]))

    def test_domain_and_name(self, cos_samples):
        spline = spline_fit(cos_samples, 'linear')
        assert spline.name == 'cos32-linear'
        assert spline.domain.a == pytest.approx(-math.pi / 4)
        assert spline.domain.b == pytest.approx(math.pi / 4)
        assert spline.source == 'samples'

    def test_validation(self, cos_samples):
        with pytest.raises(ValueError):
            spline_fit(SampleTable([0.0, 1.0, 2.0], [0.0, 1.0, 0.0]), 'cubic')
        with pytest.raises(ValueError):
            spline_fit(cos_samples, 'quintic')
        with pytest.raises(ValueError):
            spline_fit(cos_samples, 'cubic', 'clamped')

    def test_sample_table_validation(self):
        with pytest.raises(ValueError):
            SampleTable([0.0, 0.0, 1.0], [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            SampleTable([0.0], [1.0])
        with pytest.raises(ValueError):
            SampleTable([0.0, 1.0], [1.0, math.nan])


class TestFitModel:
    # 32 samples of cos on [-pi/4, pi/4] give linear 2.15e-4, not-a-knot 8.33e-8 and
    # natural 5.10e-5 against cos; the ranges below bracket those figures
    def test_linear_and_cubic_models_of_cos(self, cos_samples, even_options):
        reference = catalog.builtin('cos')
        linear = fit_model(cos_samples, 2, 2, 'linear', even_options, reference)
        cubic = fit_model(cos_samples, 2, 2, 'cubic', even_options, reference)
        assert 1e-4 <= linear.report.abs_error <= 3e-3
        assert 3e-8 <= cubic.report.abs_error <= 1e-6
        assert cubic.report.abs_error * 10 <= linear.report.abs_error

    def test_natural_end_condition_costs_two_decades(self, cos_samples, even_options):
        reference = catalog.builtin('cos')
        natural = fit_model(cos_samples, 2, 2, 'cubic', even_options, reference, bc='natural')
        not_a_knot = fit_model(cos_samples, 2, 2, 'cubic', even_options, reference)
        assert 1e-5 <= natural.report.abs_error <= 1e-4
        assert natural.report.abs_error >= 100 * not_a_knot.report.abs_error

    def test_report_against_the_spline(self, cos_samples, even_options):
        outcome = fit_model(cos_samples, 2, 2, 'cubic', even_options)
        assert outcome.report.abs_error < 1e-6
        assert outcome.approximant.parity == 'even'
        assert outcome.report.condition == pytest.approx(outcome.condition)

    def test_models_are_stable_pointwise(self, cos_samples, even_options):
        rng = np.random.default_rng(7)
        noisy = SampleTable(cos_samples.x, cos_samples.y * (1.0 + 1e-9 * rng.uniform(-1.0, 1.0, 32)))
        reference = catalog.builtin('cos')
        first = fit_model(cos_samples, 2, 2, 'cubic', even_options, reference)
        second = fit_model(noisy, 2, 2, 'cubic', even_options, reference)
        xs = np.linspace(-math.pi / 4, math.pi / 4, 501)
        scale = max(first.report.abs_error, second.report.abs_error)
        assert np.max(np.abs(first.approximant(xs) - second.approximant(xs))) <= 10 * scale
