"""
Polynomial value types for the Rational Approximation Workbench
Monomial polynomials, Chebyshev series and the reference domain map
"""

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _as_coefficients(coeffs: ArrayLike) -> np.ndarray:
    array = np.array(coeffs, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Dense polynomial in the monomial basis; coeffs[i] multiplies x**i"""

    coeffs: np.ndarray = field(default_factory=lambda: _as_coefficients([]))

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _as_coefficients(self.coeffs))

    @property
    def degree(self) -> int:
        """Index of the last stored coefficient (-1 for an empty polynomial)"""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def evaluate(self, x: ArrayLike) -> np.ndarray:
        """Horner-scheme evaluation"""
        x = np.asarray(x, dtype=float)
        result = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            result = result * x + c
        return result

    def __call__(self, x: ArrayLike) -> np.ndarray:
        return self.evaluate(x)

    def scaled(self, factor: float) -> 'Polynomial':
        return Polynomial(self.coeffs * factor)

    def padded(self, length: int) -> 'Polynomial':
        """Zero-extend to at least `length` stored coefficients"""
        if length <= len(self.coeffs):
            return self
        return Polynomial(np.concatenate([self.coeffs, np.zeros(length - len(self.coeffs))]))

    def __sub__(self, other: 'Polynomial') -> 'Polynomial':
        length = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.padded(length).coeffs - other.padded(length).coeffs)

    def __add__(self, other: 'Polynomial') -> 'Polynomial':
        length = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.padded(length).coeffs + other.padded(length).coeffs)

    def __mul__(self, other: 'Polynomial') -> 'Polynomial':
        if not len(self.coeffs) or not len(other.coeffs):
            return Polynomial([])
        return Polynomial(np.convolve(self.coeffs, other.coeffs))

    def in_square(self) -> 'Polynomial':
        """p(x**2) as a polynomial in x"""
        expanded = np.zeros(max(2 * len(self.coeffs) - 1, 0))
        expanded[::2] = self.coeffs
        return Polynomial(expanded)

    def times_x(self) -> 'Polynomial':
        return Polynomial(np.concatenate([[0.0], self.coeffs]))

    def __repr__(self) -> str:
        return f"Polynomial({self.coeffs.tolist()})"


@dataclass(frozen=True, eq=False)
class ChebSeries:
    """Chebyshev series sum(c_i T_i(x)), plain sum without a halved first term

    The primed convention (first term halved) only exists at the
    to_primed/from_primed boundary used by the cross and nonlinear builders.
    """

    coeffs: np.ndarray = field(default_factory=lambda: _as_coefficients([]))

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _as_coefficients(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def truncated(self, k: int) -> 'ChebSeries':
        """Keep c_0..c_k"""
        return ChebSeries(self.coeffs[:k + 1])

    def to_primed(self) -> np.ndarray:
        """Coefficients for the primed-sum convention (c_0 doubled)"""
        primed = np.array(self.coeffs, dtype=float)
        if len(primed):
            primed[0] *= 2.0
        return primed

    @classmethod
    def from_primed(cls, primed: ArrayLike) -> 'ChebSeries':
        plain = np.array(primed, dtype=float).reshape(-1)
        if len(plain):
            plain[0] *= 0.5
        return cls(plain)

    def __repr__(self) -> str:
        return f"ChebSeries({self.coeffs.tolist()})"


@dataclass(frozen=True)
class Domain:
    """Segment [a, b] with the affine map onto [-1, 1]"""

    a: float = -1.0
    b: float = 1.0

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not np.isfinite(a) or not np.isfinite(b) or not a < b:
            raise ValueError(f"Domain requires finite a < b, got [{self.a}, {self.b}]")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    @property
    def is_unit(self) -> bool:
        return self.a == -1.0 and self.b == 1.0

    @property
    def is_symmetric(self) -> bool:
        return self.a == -self.b

    def from_unit(self, t: ArrayLike) -> np.ndarray:
        """Map t in [-1, 1] onto [a, b]"""
        t = np.asarray(t, dtype=float)
        if self.is_unit:
            return t
        return ((self.b - self.a) * t + self.a + self.b) / 2.0

    def to_unit(self, x: ArrayLike) -> np.ndarray:
        """Inverse of from_unit"""
        x = np.asarray(x, dtype=float)
        if self.is_unit:
            return x
        return (2.0 * x - self.a - self.b) / (self.b - self.a)

    def grid(self, count: int) -> np.ndarray:
        """Uniform grid of `count` points including both endpoints"""
        return np.linspace(self.a, self.b, max(int(count), 2))

    def contains(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (x >= self.a) & (x <= self.b)

    def to_dict(self):
        return {'a': self.a, 'b': self.b}
