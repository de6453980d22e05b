"""
Tests for classical Padé approximants
"""

import math

import numpy as np
import pytest

from app.core.exceptions import DegeneratePadeError
from app.models.polynomials import Domain
from app.models.rational import TaylorSeries
from app.services import catalog
from app.services.classical_pade import pade_from_taylor, pade_residual_order, series_residual
from app.services.pade_chebyshev import build_linear_integral


def exp_series(terms):
    return TaylorSeries([1.0 / math.factorial(i) for i in range(terms)])


class TestPadeFromTaylor:
    def test_exp_2_2_coefficients(self):
        r = pade_from_taylor(exp_series(5), 2, 2)
        assert np.allclose(r.numerator.coeffs, [1.0, 0.5, 1.0 / 12])
        assert np.allclose(r.denominator.coeffs, [1.0, -0.5, 1.0 / 12])

    def test_exp_2_2_error_at_one(self):
        r = pade_from_taylor(exp_series(5), 2, 2)
        assert abs(math.e - float(r(1.0))) == pytest.approx(4e-3, abs=0.5e-3)

    def test_integral_construction_on_the_segment(self):
        # same (2, 2) form for exp; the best approximant reaches 0.87e-4
        report = build_linear_integral(catalog.builtin('exp'), 2, 2).report
        assert 0.86e-4 <= report.abs_error <= 3e-4

    def test_polynomial_case(self):
        r = pade_from_taylor(exp_series(4), 0, 3)
        assert np.allclose(r.numerator.coeffs, [1.0, 1.0, 0.5, 1.0 / 6])
        assert r.condition == 1.0

    def test_condition_recorded(self):
        r = pade_from_taylor(exp_series(8), 3, 3)
        assert r.condition > 1.0
        assert r.diagnostics['method'] == 'pade'

    def test_degenerate(self):
        cos_series = TaylorSeries([1.0, 0.0, -0.5])
        with pytest.raises(DegeneratePadeError):
            pade_from_taylor(cos_series, 1, 1)

    def test_too_few_coefficients(self):
        with pytest.raises(ValueError, match='needs 5 Taylor coefficients'):
            pade_from_taylor(exp_series(3), 2, 2)

    def test_unit_domain_only(self):
        with pytest.raises(ValueError):
            pade_from_taylor(exp_series(5), 2, 2, Domain(0.0, 1.0))

    def test_catalog_taylor(self):
        target = catalog.builtin('exp')
        r = pade_from_taylor(target.taylor(5), 2, 2, target.domain)
        x = np.linspace(-1.0, 1.0, 201)
        assert np.max(np.abs(np.exp(x) - r(x))) < 5e-3


class TestDefiningOrder:
    @pytest.mark.parametrize('m,n', [(1, 1), (2, 2), (2, 3), (3, 2)])
    def test_matches_through_order_m_plus_n(self, m, n):
        t = exp_series(m + n + 4)
        r = pade_from_taylor(t, m, n)
        assert np.all(np.abs(series_residual(t, r)[:m + n + 1]) < 1e-12)
        assert pade_residual_order(t, r) == m + n + 1

    def test_rational_target_is_exact(self):
        # 1/(1 - x/2) = sum (x/2)^i
        t = TaylorSeries([0.5 ** i for i in range(10)])
        r = pade_from_taylor(t, 1, 0)
        assert np.allclose(r.denominator.coeffs, [1.0, -0.5])
        assert pade_residual_order(t, r) == math.inf
