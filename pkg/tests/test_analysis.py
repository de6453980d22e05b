"""
Tests for error curves, extremum detection, alternation and the acceleration comparison
"""

import numpy as np
import pytest

from app.core.exceptions import PoleDetectedError
from app.models.polynomials import Domain, Polynomial
from app.models.rational import RationalApproximant
from app.models.reports import BuildOptions, Weight
from app.models.target import TargetFunction
from app.services import catalog
from app.services.analysis import (
    acceleration_compare, alternation_quality, check_poles, error_curve, error_report, extremum_interval,
    find_extrema, required_extrema, weighted_error
)
from app.services.pade_chebyshev import build_linear_integral


def chebyshev_t3(x):
    return 4.0 * x ** 3 - 3.0 * x


class TestPoles:
    def test_sign_change_is_a_pole(self):
        r = RationalApproximant(Polynomial([1.0]), Polynomial([0.1, 1.0]))
        with pytest.raises(PoleDetectedError) as info:
            check_poles(r, np.linspace(-1.0, 1.0, 101))
        assert info.value.to_dict()['locations'][0] == pytest.approx(-0.1, abs=0.02)

    def test_positive_denominator_passes(self):
        r = RationalApproximant(Polynomial([1.0]), Polynomial([2.0, 1.0]))
        check_poles(r, np.linspace(-1.0, 1.0, 101))

    def test_double_root_is_a_pole(self):
        # (x - 0.5)^2 touches zero at a grid point without changing sign
        r = RationalApproximant(Polynomial([1.0]), Polynomial([0.25, -1.0, 1.0]))
        with pytest.raises(PoleDetectedError) as info:
            check_poles(r, np.linspace(-1.0, 1.0, 101))
        assert info.value.to_dict()['locations'] == [pytest.approx(0.5)]

    def test_error_curve_refuses_poles(self, exp_target):
        r = RationalApproximant(Polynomial([1.0]), Polynomial([0.0, 1.0]))
        with pytest.raises(PoleDetectedError):
            error_curve(exp_target, r, 11)


class TestAlternation:
    def test_perfect_alternation(self):
        assert alternation_quality([1.0, -1.0, 1.0, -1.0]) == (True, 1.0)

    def test_quality_factor(self):
        ok, q = alternation_quality([1.0, -0.5, 1.0, -1.0], 4)
        assert ok
        assert q == pytest.approx(0.5)

    def test_best_window_is_used(self):
        ok, q = alternation_quality([0.1, -1.0, 0.9, -1.0], 3)
        assert ok
        assert q == pytest.approx(0.9)

    def test_missing_alternation(self):
        assert alternation_quality([1.0, 1.0, -1.0], 3) == (False, None)

    def test_zero_breaks_the_run(self):
        assert alternation_quality([1.0, -1.0, 0.0, 1.0, -1.0], 3) == (False, None)

    def test_too_few_values(self):
        assert alternation_quality([1.0, -1.0], 3) == (False, None)

    def test_required_extrema(self):
        r = RationalApproximant(Polynomial([1.0, 2.0, 3.0]), Polynomial([1.0, 0.5]))
        assert required_extrema(r) == 5


class TestExtrema:
    def test_chebyshev_polynomial_extrema(self):
        extrema = find_extrema(chebyshev_t3, -1.0, 1.0, 2001)
        xs = [x for x, _ in extrema]
        values = [v for _, v in extrema]
        assert xs == pytest.approx([-1.0, -0.5, 0.5, 1.0], abs=1e-6)
        assert values == pytest.approx([-1.0, 1.0, -1.0, 1.0], abs=1e-9)

    def test_refinement_beats_the_grid(self):
        # the peak of -(x - 0.3337)^2 + 1 falls between grid points
        def bump(x):
            return 1.0 - (x - 0.3337) ** 2

        extrema = find_extrema(bump, 0.0, 1.0, 11)
        assert len(extrema) == 1
        assert extrema[0][0] == pytest.approx(0.3337, abs=1e-6)

    def test_parity_forms_alternate_on_the_right_half(self):
        r = RationalApproximant(Polynomial([1.0]), Polynomial([1.0]), 'odd', Domain(-2.0, 2.0))
        assert extremum_interval(r, Weight('absolute')) == (0.0, 2.0)
        lo, hi = extremum_interval(r, Weight('relative'))
        assert 0.0 < lo < 1e-5
        assert hi == 2.0


class TestErrorReport:
    def test_near_best_approximant_alternates(self, exp_target):
        r = build_linear_integral(exp_target, 2, 2).approximant
        report = error_report(exp_target, r)
        assert report.alternation
        assert len(report.extrema) >= 6
        assert 0.0 < report.q <= 1.0
        assert report.lower_bound <= report.abs_error

    def test_relative_weight(self, exp_target):
        r = build_linear_integral(exp_target, 2, 2, BuildOptions(weight='relative')).approximant
        report = error_report(exp_target, r, Weight('relative'))
        assert report.weight == 'relative'
        assert report.rel_error == pytest.approx(
            np.max(np.abs(weighted_error(exp_target, r, Weight('relative'))(np.linspace(-1, 1, 2000)))),
            rel=1e-9
        )

    def test_zeros_of_f_are_excluded_from_the_relative_error(self):
        atan = catalog.builtin('atan')
        r = build_linear_integral(atan, 2, 2, BuildOptions(parity_form='odd')).approximant
        xs, difference, relative = error_curve(atan, r, 3)
        assert xs[1] == 0.0
        assert np.isnan(relative[1])
        report = error_report(atan, r, checkpoints=3)
        assert report.excluded_points == 1
        assert report.rel_error is not None

    def test_curve_columns(self, cos_quarter):
        r = build_linear_integral(cos_quarter, 1, 1, BuildOptions(parity_form='even')).approximant
        xs, difference, relative = error_curve(cos_quarter, r, 101)
        assert xs.shape == difference.shape == relative.shape == (101,)
        assert np.allclose(relative, difference / cos_quarter(xs))

    def test_condition_is_carried(self, exp_target):
        outcome = build_linear_integral(exp_target, 2, 2)
        assert outcome.report.condition == pytest.approx(outcome.condition)

    def test_quality_of_the_odd_sine(self):
        # t * P(t^2) / Q(t^2) fits sin(pi t / 2) / t, so the relative error is the
        # near-equioscillating one; the absolute error carries the factor t and its
        # extremum next to the origin is small
        sine = catalog.builtin('sin-scaled', 2)
        r = build_linear_integral(sine, 2, 2, BuildOptions(parity_form='odd')).approximant
        absolute = error_report(sine, r, Weight('absolute'))
        relative = error_report(sine, r, Weight('relative'))
        assert absolute.q == pytest.approx(0.0625, rel=0.2)
        assert relative.q == pytest.approx(0.71, rel=0.1)
        # best possible relative error of this row is 0.53e-8
        assert relative.lower_bound <= 0.54e-8


class TestAcceleration:
    def test_rational_beats_the_partial_sum(self):
        record = acceleration_compare(catalog.builtin('tan-scaled', 4), 3, 3)
        assert record.poly_degree == 19
        assert 1e-12 <= record.poly_error <= 1e-10
        assert record.rational_error < 1e-3 * record.poly_error

    def test_plain_form(self, exp_target):
        record = acceleration_compare(exp_target, 1, 1)
        assert record.poly_degree == 3
        assert 0.0 < record.poly_error < 1e-2
        assert np.isfinite(record.rational_error)

    def test_record_dict(self):
        target = TargetFunction('exp', np.exp, Domain())
        record = acceleration_compare(target, 1, 2, checkpoints=101)
        assert set(record.to_dict()) == {'poly_error', 'rational_error', 'poly_degree'}
