"""
Kernel coefficient types of the elementary-function library
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

ORDINARY = 'ordinary'
ENHANCED = 'enhanced'
PRECISIONS = (ORDINARY, ENHANCED)

KERNEL_SYMBOLS: Dict[str, Tuple[str, ...]] = {
    ORDINARY: ('a', 'b', 'c', 'alpha', 'beta'),
    ENHANCED: ('a', 'b', 'c', 'd', 'alpha', 'beta', 'gamma')
}

# Order in which the published tables list the Jacobi fraction
JACOBI_SYMBOLS: Dict[str, Tuple[str, ...]] = {
    ORDINARY: ('c', 'mu', 'lam', 'nu', 'ae'),
    ENHANCED: ('d', 'xi', 'eta', 'mu', 'lam', 'nu', 'ae')
}


def check_precision(precision: str) -> str:
    if precision not in PRECISIONS:
        raise ValueError(f"Unknown precision '{precision}', expected ordinary or enhanced")
    return precision


@dataclass(frozen=True)
class KernelCoeffs:
    """y (a + b y^2 + c y^4 [+ d y^6]) / (alpha + beta y^2 [+ gamma y^4] + y^4 or y^6)"""

    function: str
    precision: str
    values: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        check_precision(self.precision)
        missing = [s for s in KERNEL_SYMBOLS[self.precision] if s not in self.values]
        if missing:
            raise ValueError(f"Kernel {self.function}/{self.precision} is missing {', '.join(missing)}")

    def __getitem__(self, symbol: str) -> float:
        return self.values[symbol]

    def as_list(self):
        return [self.values[s] for s in KERNEL_SYMBOLS[self.precision]]


@dataclass(frozen=True)
class JacobiCoeffs:
    """Continued-fraction (Jacobi) form of a kernel

    ordinary: y (c + mu / (y^2 + nu + ae / (y^2 + lam)))
    enhanced: y (d + xi / (y^2 + eta + mu / (y^2 + nu + ae / (y^2 + lam))))
    """

    function: str
    precision: str
    values: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        check_precision(self.precision)
        missing = [s for s in JACOBI_SYMBOLS[self.precision] if s not in self.values]
        if missing:
            raise ValueError(f"Jacobi fraction {self.function}/{self.precision} is missing {', '.join(missing)}")

    def __getitem__(self, symbol: str) -> float:
        return self.values[symbol]

    def as_list(self):
        return [self.values[s] for s in JACOBI_SYMBOLS[self.precision]]
