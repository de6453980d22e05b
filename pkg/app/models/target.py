"""
Target function types
What the constructors approximate: catalog functions, coefficient lists and sampled data
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import EvaluationError
from app.models.polynomials import ArrayLike, Domain
from app.models.rational import TaylorSeries

PARITY_HINTS = ('even', 'odd', None)

SOURCE_BUILTIN = 'builtin'
SOURCE_TAYLOR = 'taylor'
SOURCE_CHEBYSHEV = 'chebyshev'
SOURCE_SAMPLES = 'samples'


class TargetFunction:
    """A function with an evaluation contract on its domain"""

    def __init__(self, name: str, evaluator: Callable[[np.ndarray], np.ndarray],
                 domain: Optional[Domain] = None, parity_hint: Optional[str] = None,
                 source: str = SOURCE_BUILTIN, derivative_at_zero: Optional[float] = None,
                 taylor_generator: Optional[Callable[[int], TaylorSeries]] = None,
                 parameters: Optional[Dict[str, Any]] = None):
        """Create a target function

        Args:
            name: Display name
            evaluator: Vectorised evaluation on numpy arrays
            domain: Approximation segment (defaults to [-1, 1])
            parity_hint: 'even', 'odd' or None
            source: builtin, taylor, chebyshev or samples
            derivative_at_zero: f'(0) for the f(x)/x reduction of odd targets
            taylor_generator: Returns the first N+1 Taylor coefficients at 0
            parameters: Catalog parameters (e.g. the divisor k)
        """
        if parity_hint not in PARITY_HINTS:
            raise ValueError(f"Unknown parity hint '{parity_hint}'")
        self.name = name
        self.evaluator = evaluator
        self.domain = domain or Domain()
        self.parity_hint = parity_hint
        self.source = source
        self.derivative_at_zero = derivative_at_zero
        self.taylor_generator = taylor_generator
        self.parameters = dict(parameters or {})

    def __call__(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        with np.errstate(all='ignore'):
            values = np.asarray(self.evaluator(x), dtype=float)
        if values.shape != x.shape:
            values = np.broadcast_to(values, x.shape).astype(float)
        if not np.all(np.isfinite(values)):
            bad = np.atleast_1d(x)[~np.isfinite(np.atleast_1d(values))]
            raise EvaluationError(
                f"{self.name} is not finite at {bad.size} point(s), first at x={bad[0]!r}",
                function=self.name, x=float(bad[0])
            )
        return values

    def on_unit(self, t: ArrayLike) -> np.ndarray:
        """Evaluate at the image of t in [-1, 1]"""
        return self(self.domain.from_unit(t))

    def taylor(self, terms: int) -> TaylorSeries:
        """First `terms` Taylor coefficients about 0"""
        if self.taylor_generator is None:
            raise ValueError(f"{self.name} has no Taylor expansion available")
        return self.taylor_generator(terms)

    def with_domain(self, domain: Domain) -> 'TargetFunction':
        return TargetFunction(self.name, self.evaluator, domain, self.parity_hint, self.source,
                              self.derivative_at_zero, self.taylor_generator, self.parameters)

    def describe(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'source': self.source,
            'domain': self.domain.to_dict(),
            'parity_hint': self.parity_hint,
            'parameters': self.parameters,
            'has_taylor': self.taylor_generator is not None
        }

    def __repr__(self) -> str:
        return f"TargetFunction({self.name!r}, [{self.domain.a}, {self.domain.b}])"


SPLINE_KINDS = ('linear', 'cubic')


@dataclass(frozen=True, eq=False)
class SampleTable:
    """Sampled data (x_i, y_i) with strictly increasing abscissae"""

    x: np.ndarray
    y: np.ndarray
    name: str = 'samples'
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        y = np.array(self.y, dtype=float).reshape(-1)
        if x.shape != y.shape:
            raise ValueError(f"Sample table needs matching columns, got {x.size} x and {y.size} y values")
        if x.size < 2:
            raise ValueError("Sample table needs at least 2 points")
        if np.any(np.diff(x) <= 0):
            raise ValueError("Sample abscissae must be strictly increasing")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("Sample table contains non-finite values")
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'y', y)

    @classmethod
    def from_points(cls, points: Sequence[Tuple[float, float]], name: str = 'samples') -> 'SampleTable':
        array = np.array(points, dtype=float).reshape(-1, 2)
        return cls(array[:, 0], array[:, 1], name)

    @property
    def size(self) -> int:
        return int(self.x.size)

    @property
    def domain(self) -> Domain:
        return Domain(self.x[0], self.x[-1])
