"""
Exceptions for the Rational Approximation Workbench
Every failure the numerical services can report, with the diagnostics callers need
"""

from typing import Any, Dict, List, Optional


class WorkbenchError(Exception):
    """Base class for all workbench failures"""

    exit_code = 3

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view used by the API and the CLI report"""
        payload = {'type': type(self).__name__, 'message': str(self)}
        for key, value in self.details.items():
            if isinstance(value, (int, float, str, bool, list)) or value is None:
                payload[key] = value
        return payload


class DegreeCapError(WorkbenchError, ValueError):
    """Requested degree exceeds the basis-conversion cap"""

    exit_code = 2


class ShapeError(WorkbenchError, ValueError):
    """Operands do not have compatible shapes"""

    exit_code = 2


class SingularMatrixError(WorkbenchError):
    """Elimination met a pivot below the singularity threshold"""

    def __init__(self, message: str, pivot_index: int):
        super().__init__(message, pivot_index=pivot_index)
        self.pivot_index = pivot_index


class ConstructionError(WorkbenchError):
    """An approximant could not be built from its defining system"""

    def __init__(self, message: str, condition: Optional[float] = None, **details: Any):
        super().__init__(message, condition=condition, **details)
        self.condition = condition


class DegeneratePadeError(ConstructionError):
    """The Padé approximant with the requested degrees does not exist or is non-normal"""


class NonexistenceError(ConstructionError):
    """The nonlinear Padé–Chebyshev approximant does not exist for these degrees"""


class InsufficientAlternationError(ConstructionError):
    """Error curve has fewer alternating extrema than the exchange needs"""


class ConversionError(ConstructionError):
    """Continued-fraction conversion broke down"""


class RemezDivergenceError(ConstructionError):
    """Remez iteration stopped improving"""

    def __init__(self, message: str, state: Any):
        super().__init__(message)
        self.state = state


class EvaluationError(WorkbenchError):
    """A target function could not be evaluated"""

    exit_code = 4


class PoleDetectedError(EvaluationError):
    """Denominator vanishes inside the domain"""

    def __init__(self, message: str, locations: List[float]):
        super().__init__(message, locations=[float(x) for x in locations])
        self.locations = list(locations)


class ElemfunDomainError(EvaluationError, ValueError):
    """Argument outside the mathematical domain of an elementary function"""


class ElemfunOverflowError(EvaluationError, OverflowError):
    """Result exceeds the floating-point range"""


class UsageError(WorkbenchError, ValueError):
    """Invalid job specification"""

    exit_code = 2
