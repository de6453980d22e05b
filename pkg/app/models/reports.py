"""
Result and option types shared by the construction and analysis services
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from app.models.polynomials import Polynomial
from app.models.rational import NORMALIZATIONS, PARITY_FORMS, PLAIN, ODD, RationalApproximant

ABSOLUTE = 'absolute'
RELATIVE = 'relative'


@dataclass(frozen=True)
class Weight:
    """Error weight: absolute (rho = 1) or relative (rho = f)"""

    kind: str = ABSOLUTE

    def __post_init__(self):
        if self.kind not in (ABSOLUTE, RELATIVE):
            raise ValueError(f"Unknown weight '{self.kind}', expected absolute or relative")

    @property
    def is_relative(self) -> bool:
        return self.kind == RELATIVE


@dataclass(frozen=True)
class BuildOptions:
    """Options of the quadrature-based Padé–Chebyshev construction

    matrix_noise/noise_seed perturb the assembled system entries
    relatively; they stand in for a second machine solving the same system.
    """

    normalization: str = 'b0'
    parity_form: str = PLAIN
    quadrature_nodes: int = 128
    checkpoints: int = 2000
    weight: str = ABSOLUTE
    matrix_noise: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"Unknown normalization '{self.normalization}'")
        if self.parity_form not in PARITY_FORMS:
            raise ValueError(f"Unknown parity form '{self.parity_form}'")
        if self.quadrature_nodes < 1:
            raise ValueError("quadrature_nodes must be >= 1")
        if self.checkpoints < 2:
            raise ValueError("checkpoints must be >= 2")
        if self.matrix_noise < 0:
            raise ValueError("matrix_noise must be >= 0")
        Weight(self.weight)

    def replace(self, **changes: Any) -> 'BuildOptions':
        values = asdict(self)
        values.update(changes)
        return BuildOptions(**values)


@dataclass
class SolveResult:
    """Solution of a dense system with its diagnostics"""

    solution: np.ndarray
    condition: Optional[float] = None
    pivot_growth: float = 1.0


@dataclass
class ApproxReport:
    """Error figures of an approximant against its target"""

    abs_error: float
    rel_error: Optional[float]
    extrema: List[Tuple[float, float]]
    alternation: bool
    q: Optional[float]
    lower_bound: Optional[float]
    weight: str = ABSOLUTE
    checkpoints: int = 0
    excluded_points: int = 0
    condition: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'abs_error': self.abs_error,
            'rel_error': self.rel_error,
            'extrema': [[float(x), float(v)] for x, v in self.extrema],
            'alternation': self.alternation,
            'q': self.q,
            'lower_bound': self.lower_bound,
            'weight': self.weight,
            'checkpoints': self.checkpoints,
            'excluded_points': self.excluded_points,
            'condition': self.condition
        }


@dataclass
class BuildOutcome:
    """Approximant, system condition and error report of one construction"""

    approximant: RationalApproximant
    condition: float
    report: ApproxReport
    system: Optional[np.ndarray] = None
    solution: Optional[np.ndarray] = None


@dataclass
class RemezState:
    """Critical points and levelled error of the exchange iteration"""

    critical_points: np.ndarray
    lam: float = 0.0
    iteration: int = 0
    bracket_history: List[Tuple[float, float]] = field(default_factory=list)
    converged: bool = False

    def __post_init__(self):
        self.critical_points = np.array(self.critical_points, dtype=float).reshape(-1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'critical_points': [float(x) for x in self.critical_points],
            'lambda': self.lam,
            'iteration': self.iteration,
            'bracket_history': [[lo, hi] for lo, hi in self.bracket_history],
            'converged': self.converged
        }


@dataclass
class ErrorApproximant:
    """Delta-P / Delta-Q of two constructions sharing a shape"""

    delta_num: Polynomial
    delta_den: Polynomial
    excluded_zones: List[Tuple[float, float]]
    parity: str = PLAIN
    domain: Any = None
    degenerate: bool = False

    def parts(self, x) -> Tuple[np.ndarray, np.ndarray]:
        t = self.domain.to_unit(x)
        if self.parity == PLAIN:
            return self.delta_num(t), self.delta_den(t)
        u = t * t
        numerator = self.delta_num(u)
        if self.parity == ODD:
            numerator = t * numerator
        return numerator, self.delta_den(u)

    def evaluate(self, x) -> np.ndarray:
        if self.degenerate:
            raise ValueError("Degenerate error approximant (both differences vanish)")
        numerator, denominator = self.parts(x)
        with np.errstate(divide='ignore', invalid='ignore'):
            return numerator / denominator

    def is_excluded(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mask = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.excluded_zones:
            mask |= (x >= lo) & (x <= hi)
        return mask

    def coefficient_vector(self) -> np.ndarray:
        return np.concatenate([self.delta_num.coeffs, self.delta_den.coeffs])


@dataclass
class ExperimentRecord:
    """Outcome of one autocorrection experiment"""

    coeff_rel_error: float
    approximant_error_r1: float
    approximant_error_r2: float
    error_approximant_error: Optional[float]
    cond: Optional[float]
    degenerate: bool = False
    excluded_zones: List[Tuple[float, float]] = field(default_factory=list)
    perturbation: str = ''

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload['excluded_zones'] = [[float(lo), float(hi)] for lo, hi in self.excluded_zones]
        return payload


@dataclass
class AccelerationRecord:
    poly_error: float
    rational_error: float
    poly_degree: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class HarnessRecord:
    """Accuracy of an elementary function against the high-precision reference"""

    function: str
    precision: str
    interval: Tuple[float, float]
    abs_error: float
    rel_error: float
    mean_abs_error: float
    mean_rel_error: float
    grid: int

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload['interval'] = list(self.interval)
        return payload
