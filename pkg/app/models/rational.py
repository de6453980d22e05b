"""
Rational approximant types
Taylor input series and the P/Q approximant in plain, even and odd forms
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from app.models.polynomials import ArrayLike, Domain, Polynomial, _as_coefficients

PLAIN = 'plain'
EVEN = 'even'
ODD = 'odd'
PARITY_FORMS = (PLAIN, EVEN, ODD)

NORMALIZATIONS = ('b0', 'bm', 'an')


def check_parity(parity: str) -> str:
    if parity not in PARITY_FORMS:
        raise ValueError(f"Unknown parity form '{parity}', expected one of {', '.join(PARITY_FORMS)}")
    return parity


def plain_degrees(m: int, n: int, parity: str) -> Tuple[int, int]:
    """(m, n) of the plain form equivalent to a parity form"""
    if parity == EVEN:
        return 2 * m, 2 * n
    if parity == ODD:
        return 2 * m, 2 * n + 1
    return m, n


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    """Taylor coefficients c_0..c_N about the origin"""

    coeffs: np.ndarray = field(default_factory=lambda: _as_coefficients([]))

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _as_coefficients(self.coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def coefficient(self, index: int) -> float:
        """c_index with c_l = 0 outside the stored range"""
        if index < 0 or index >= len(self.coeffs):
            return 0.0
        return float(self.coeffs[index])

    def truncated(self, terms: int) -> 'TaylorSeries':
        return TaylorSeries(self.coeffs[:terms])

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs)


@dataclass(frozen=True, eq=False)
class RationalApproximant:
    """R = P/Q over a domain, in one of three parity forms

    Polynomials are stored in the reduced variable t = domain.to_unit(x).
    plain: R = P(t)/Q(t); even: R = P(t^2)/Q(t^2); odd: R = t*P(t^2)/Q(t^2).
    """

    numerator: Polynomial
    denominator: Polynomial
    parity: str = PLAIN
    domain: Domain = field(default_factory=Domain)
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        check_parity(self.parity)
        if self.denominator.is_zero():
            raise ValueError("Denominator is identically zero")

    @property
    def degrees(self) -> Tuple[int, int]:
        """(m, n): denominator and numerator degrees of the parity form"""
        return self.denominator.degree, self.numerator.degree

    @property
    def plain_degrees(self) -> Tuple[int, int]:
        m, n = self.degrees
        return plain_degrees(m, n, self.parity)

    @property
    def condition(self) -> Optional[float]:
        return self.diagnostics.get('condition')

    def parts(self, x: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """Numerator and denominator values at x (odd factor included in the numerator)"""
        t = self.domain.to_unit(x)
        if self.parity == PLAIN:
            return self.numerator(t), self.denominator(t)
        u = t * t
        numerator = self.numerator(u)
        if self.parity == ODD:
            numerator = t * numerator
        return numerator, self.denominator(u)

    def evaluate(self, x: ArrayLike) -> np.ndarray:
        numerator, denominator = self.parts(x)
        with np.errstate(divide='ignore', invalid='ignore'):
            return numerator / denominator

    def __call__(self, x: ArrayLike) -> np.ndarray:
        return self.evaluate(x)

    def normalized(self, kind: str) -> 'RationalApproximant':
        """Same function with b0 = 1, b_m = 1 or a_n = 1"""
        if kind == 'b0':
            pivot = self.denominator.coeffs[0]
        elif kind == 'bm':
            pivot = self.denominator.coeffs[-1]
        elif kind == 'an':
            pivot = self.numerator.coeffs[-1] if len(self.numerator.coeffs) else 0.0
        else:
            raise ValueError(f"Unknown normalization '{kind}', expected one of {', '.join(NORMALIZATIONS)}")
        if pivot == 0.0:
            raise ValueError(f"Cannot normalize with {kind}: coefficient is zero")
        return RationalApproximant(
            self.numerator.scaled(1.0 / pivot),
            self.denominator.scaled(1.0 / pivot),
            self.parity,
            self.domain,
            dict(self.diagnostics)
        )

    def to_plain(self) -> 'RationalApproximant':
        """Expand an even/odd form into the equivalent plain form"""
        if self.parity == PLAIN:
            return self
        numerator = self.numerator.in_square()
        if self.parity == ODD:
            numerator = numerator.times_x()
        return RationalApproximant(numerator, self.denominator.in_square(), PLAIN,
                                   self.domain, dict(self.diagnostics))

    def coefficient_vector(self) -> np.ndarray:
        """(a_0..a_n, b_0..b_m), the unknown vector of the defining system"""
        return np.concatenate([self.numerator.coeffs, self.denominator.coeffs])

    def same_shape(self, other: 'RationalApproximant') -> bool:
        return (self.parity == other.parity and self.degrees == other.degrees
                and self.domain == other.domain)

    def to_dict(self) -> Dict[str, Any]:
        m, n = self.degrees
        return {
            'm': m,
            'n': n,
            'parity': self.parity,
            'domain': self.domain.to_dict(),
            'numerator': [float(c) for c in self.numerator.coeffs],
            'denominator': [float(c) for c in self.denominator.coeffs]
        }
