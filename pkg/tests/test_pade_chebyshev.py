"""
Tests for the linear, cross-multiplied and nonlinear Padé–Chebyshev constructions
"""

import numpy as np
import pytest

from app.core.exceptions import ConstructionError, NonexistenceError
from app.models.polynomials import ChebSeries, Domain
from app.models.rational import RationalApproximant, TaylorSeries
from app.models.reports import BuildOptions
from app.models.target import TargetFunction
from app.services import catalog
from app.services.analysis import error_report
from app.services.cheb_core import cheb_series_eval
from app.services.pade_chebyshev import (
    build_linear_cross, build_linear_integral, build_nonlinear, normalization_row, odd_quotient,
    orthogonality_residuals, orthogonality_system, series_input, taylor_to_cheb_truncated
)


def rational_target(domain=None):
    """(1 + 0.5t + 0.2t^2) / (1 + 0.3t) on [-1, 1]"""
    def evaluate(x):
        return (1.0 + 0.5 * x + 0.2 * x * x) / (1.0 + 0.3 * x)
    return TargetFunction('rational', evaluate, domain or Domain())


class TestLinearIntegral:
    def test_recovers_rational_target(self):
        outcome = build_linear_integral(rational_target(), 1, 2)
        r = outcome.approximant
        assert np.allclose(r.numerator.coeffs, [1.0, 0.5, 0.2], atol=1e-10)
        assert np.allclose(r.denominator.coeffs, [1.0, 0.3], atol=1e-10)
        assert outcome.report.abs_error < 1e-12

    def test_system_shape_and_solution(self):
        outcome = build_linear_integral(catalog.builtin('exp'), 2, 2)
        assert outcome.system.shape == (5, 6)
        assert np.max(np.abs(outcome.system @ outcome.solution)) < 1e-12

    def test_orthogonality_residuals_vanish(self, exp_target):
        r = build_linear_integral(exp_target, 2, 3).approximant
        assert np.max(np.abs(orthogonality_residuals(exp_target, r))) < 1e-12

    def test_normalizations_give_the_same_function(self, exp_target):
        x = np.linspace(-1.0, 1.0, 101)
        values = [build_linear_integral(exp_target, 2, 2, BuildOptions(normalization=k)).approximant(x)
                  for k in ('b0', 'bm', 'an')]
        assert np.allclose(values[0], values[1], rtol=1e-11, atol=0)
        assert np.allclose(values[0], values[2], rtol=1e-11, atol=0)

    def test_bm_normalization_pins_the_leading_coefficient(self, exp_target):
        r = build_linear_integral(exp_target, 2, 2, BuildOptions(normalization='bm')).approximant
        assert r.denominator.coeffs[-1] == pytest.approx(1.0)

    def test_cos_even_form_condition(self, cos_quarter):
        outcome = build_linear_integral(cos_quarter, 2, 3, BuildOptions(parity_form='even'))
        assert 1e7 <= outcome.condition <= 1e11
        assert outcome.report.rel_error < 2e-13

    def test_parity_form_degrees(self, cos_quarter):
        r = build_linear_integral(cos_quarter, 2, 3, BuildOptions(parity_form='even')).approximant
        assert r.degrees == (2, 3)
        assert r.plain_degrees == (4, 6)

    def test_odd_form_needs_zero_at_origin(self, exp_target):
        with pytest.raises(ValueError, match='f\\(0\\) = 0'):
            build_linear_integral(exp_target, 1, 1, BuildOptions(parity_form='odd'))

    def test_parity_form_needs_symmetric_domain(self):
        with pytest.raises(ValueError, match='symmetric'):
            build_linear_integral(catalog.builtin('sqrt'), 1, 1, BuildOptions(parity_form='even'))

    def test_singular_system(self):
        # f = 0 leaves the denominator undetermined
        zero = TargetFunction('zero', np.zeros_like)
        with pytest.raises(ConstructionError):
            build_linear_integral(zero, 1, 1)

    def test_matrix_noise_changes_coefficients_not_error(self, exp_target):
        clean = build_linear_integral(exp_target, 3, 3)
        noisy = build_linear_integral(exp_target, 3, 3, BuildOptions(matrix_noise=1e-10, noise_seed=4))
        assert not np.allclose(clean.solution, noisy.solution, rtol=0, atol=0)
        assert noisy.report.abs_error < 10 * clean.report.abs_error


class TestPublishedRows:
    """Absolute and relative errors of the integral construction, within a factor of 3"""

    @pytest.mark.parametrize('name, k, m, n, parity, delta, rel_delta', [
        ('sqrt', None, 2, 2, 'plain', 0.8e-6, 1.13e-6),
        ('sqrt', None, 3, 3, 'plain', 1.9e-9, 2.7e-9),
        ('cos-scaled', 4, 1, 2, 'even', 0.24e-7, 0.34e-7),
        ('cos-scaled', 4, 2, 2, 'even', 0.69e-10, 0.94e-10),
        ('sin-scaled', 4, 2, 2, 'odd', 0.32e-11, 0.45e-11),
        ('sin-scaled', 2, 1, 1, 'odd', 0.14e-3, 0.14e-3),
        ('sin-scaled', 2, 2, 2, 'odd', 0.63e-8, 0.63e-8),
        ('sin-scaled', 2, 3, 3, 'odd', 0.63e-13, 0.63e-13),
        ('tan-scaled', 4, 1, 1, 'odd', 0.64e-5, 0.64e-5),
        ('tan-scaled', 4, 2, 1, 'odd', 0.16e-7, 0.16e-7),
        ('tan-scaled', 4, 2, 2, 'odd', 0.25e-10, 0.25e-10),
        ('atan', None, 2, 3, 'odd', 0.16e-7, 0.51e-7),
        ('atan', None, 3, 3, 'odd', 0.54e-9, 1.9e-9),
        ('atan', None, 4, 4, 'odd', 0.12e-11, 0.48e-11)
    ])
    def test_row(self, name, k, m, n, parity, delta, rel_delta):
        outcome = build_linear_integral(catalog.builtin(name, k), m, n, BuildOptions(parity_form=parity))
        assert delta / 3 <= outcome.report.abs_error <= delta * 3
        assert rel_delta / 3 <= outcome.report.rel_error <= rel_delta * 3


class TestSystemPieces:
    def test_normalization_rows(self):
        assert list(normalization_row(2, 1, 'b0')) == [0, 0, 1, 0, 0]
        assert list(normalization_row(2, 1, 'bm')) == [0, 0, 0, 0, 1]
        assert list(normalization_row(2, 1, 'an')) == [0, 1, 0, 0, 0]
        with pytest.raises(ValueError):
            normalization_row(1, 1, 'b1')

    def test_system_rows(self, exp_target):
        assert orthogonality_system(exp_target, 1, 3, s=32).shape == (5, 6)

    def test_odd_quotient_limit(self):
        sine = catalog.builtin('sin-scaled', 2)
        phi = odd_quotient(sine, np.array([0.0, 0.5]))
        assert phi[0] == pytest.approx(np.pi / 2)
        assert phi[1] == pytest.approx(np.sin(np.pi / 4) / 0.5)

    def test_odd_quotient_without_derivative(self):
        target = TargetFunction('sin', np.sin, Domain())
        assert odd_quotient(target, np.array([0.0]))[0] == pytest.approx(1.0, abs=1e-6)


class TestCrossAndNonlinear:
    def test_cross_agrees_with_quadrature(self, exp_target):
        series = series_input(exp_target, 2, 2, 'plain', 128)
        cross = build_linear_cross(series, 2, 2)
        integral = build_linear_integral(exp_target, 2, 2).approximant
        x = np.linspace(-1.0, 1.0, 51)
        assert np.allclose(cross(x), integral(x), rtol=1e-10, atol=0)

    def test_nonlinear_beats_linear_for_exp(self, exp_target):
        series = series_input(exp_target, 3, 3, 'plain', 128)
        nonlinear = error_report(exp_target, build_nonlinear(series, 3, 3)).abs_error
        linear = build_linear_integral(exp_target, 3, 3).report.abs_error
        assert 0.17e-6 <= nonlinear <= 0.40e-6
        assert 0.2e-6 <= linear <= 0.5e-6
        assert nonlinear < linear

    def test_polynomial_case_is_the_partial_sum(self, exp_target):
        series = series_input(exp_target, 0, 4, 'plain', 64)
        r = build_nonlinear(series, 0, 4)
        x = np.linspace(-1.0, 1.0, 21)
        assert np.allclose(r(x), cheb_series_eval(series.truncated(4), x), atol=1e-14)

    def test_denominator_normalised_to_one_at_b0(self, exp_target):
        r = build_nonlinear(series_input(exp_target, 2, 2, 'plain', 128), 2, 2)
        assert isinstance(r, RationalApproximant)
        assert r.diagnostics['method'] == 'pc-nonlinear'

    def test_short_series(self):
        with pytest.raises(ValueError, match='c_0..c_6'):
            build_linear_cross(ChebSeries([1.0, 0.5, 0.25]), 2, 2)
        with pytest.raises(ValueError):
            build_nonlinear(ChebSeries([1.0, 0.5]), 2, 2)

    def test_nonexistence(self):
        # every coefficient past c_0 vanishes: the gamma system is zero
        with pytest.raises(NonexistenceError):
            build_nonlinear(ChebSeries([1.0, 0.0, 0.0, 0.0, 0.0]), 2, 2)

    def test_odd_form_folding(self):
        target = catalog.builtin('tan-scaled', 4)
        r = build_nonlinear(series_input(target, 2, 2, 'odd', 128), 2, 2, 'odd', target.domain)
        assert r.degrees == (2, 2)
        x = np.linspace(-1.0, 1.0, 101)
        assert np.max(np.abs(r(x) - target(x))) < 1e-8


class TestTruncatedTaylorInput:
    def test_matches_exact_polynomial(self):
        t = TaylorSeries([1.0, 2.0, 3.0])
        series = taylor_to_cheb_truncated(t, 2, 2)
        assert np.allclose(series.coeffs, [2.5, 2.0, 1.5])

    def test_truncates_the_chebyshev_side(self):
        t = TaylorSeries([1.0, 0.0, 0.0, 1.0])
        assert np.allclose(taylor_to_cheb_truncated(t, 3, 1).coeffs, [1.0, 0.75])

    def test_validation(self):
        with pytest.raises(ValueError):
            taylor_to_cheb_truncated(TaylorSeries([1.0, 1.0]), 1, 2)
        with pytest.raises(ValueError):
            taylor_to_cheb_truncated(TaylorSeries([1.0]), 3, 2)
