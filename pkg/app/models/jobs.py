"""
Job specification shared by the command line and the HTTP API
"""

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional

from app.core.exceptions import UsageError
from app.models.kernels import PRECISIONS
from app.models.rational import NORMALIZATIONS, PARITY_FORMS
from app.models.reports import ABSOLUTE, RELATIVE
from app.models.target import SPLINE_KINDS

COMMANDS = ('approx', 'report', 'autocorrect', 'elemfun-check', 'model', 'accelerate')
APPROX_METHODS = ('pade', 'pc-linear', 'pc-cross', 'pc-nonlinear', 'remez')
AUTOCORRECT_METHODS = ('pc-linear', 'pc-cross', 'pc-nonlinear', 'pade')
REMEZ_SEEDS = ('default', 'pc-linear')

# Commands that approximate a target function
TARGET_COMMANDS = ('approx', 'report', 'autocorrect', 'accelerate')


@dataclass
class JobSpec:
    """One workbench run; validate() rejects every invalid combination before dispatch"""

    command: str
    fn: Optional[str] = None
    k: Optional[float] = None
    taylor: Optional[List[float]] = None
    chebyshev: Optional[List[float]] = None
    samples: Optional[List[List[float]]] = None
    spline: str = 'cubic'
    bc: str = 'not-a-knot'
    a: Optional[float] = None
    b: Optional[float] = None
    m: int = 0
    n: int = 0
    method: str = 'pc-linear'
    parity: Optional[str] = None
    normalization: str = 'b0'
    weight: str = ABSOLUTE
    quadrature_nodes: Optional[int] = None
    checkpoints: Optional[int] = None
    noise: float = 0.0
    noise_seed: int = 0

    # autocorrect
    level: Optional[float] = None
    nodes2: Optional[int] = None
    normalization2: Optional[str] = None
    n1: Optional[int] = None
    n2: Optional[int] = None
    sweep: Optional[List[int]] = None

    # remez
    tolerance: Optional[float] = None
    max_cycles: Optional[int] = None
    seed: str = 'default'

    # elemfun-check
    function: Optional[str] = None
    precision: str = 'both'
    grid: int = 10000
    form: str = 'kernel'
    x: Optional[float] = None
    exponent: Optional[float] = None

    # model
    reference: Optional[str] = None

    name: Optional[str] = None

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'JobSpec':
        """Build from a JSON job; unknown keys are a usage error"""
        if not isinstance(payload, dict):
            raise UsageError("A job must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(payload) - known)
        if unknown:
            raise UsageError(f"Unknown job field(s): {', '.join(unknown)}")
        if 'command' not in payload:
            raise UsageError("A job needs a 'command'")
        try:
            spec = cls(**payload)
        except TypeError as e:
            raise UsageError(str(e)) from e
        return spec.validate()

    def to_dict(self) -> Dict[str, Any]:
        return {key: value for key, value in asdict(self).items() if value is not None}

    @property
    def sources(self) -> List[str]:
        return [name for name in ('fn', 'taylor', 'chebyshev', 'samples') if getattr(self, name) is not None]

    def validate(self) -> 'JobSpec':
        if self.command not in COMMANDS:
            raise UsageError(f"Unknown command '{self.command}', expected one of {', '.join(COMMANDS)}")

        self._validate_integers()
        if (self.a is None) != (self.b is None):
            raise UsageError("Give both ends of the domain (--a and --b) or neither")
        if self.a is not None and not float(self.a) < float(self.b):
            raise UsageError(f"The domain needs a < b, got a={self.a}, b={self.b}")
        if self.parity is not None and self.parity not in PARITY_FORMS:
            raise UsageError(f"Unknown parity form '{self.parity}'")
        if self.normalization not in NORMALIZATIONS:
            raise UsageError(f"Unknown normalization '{self.normalization}'")
        if self.weight not in (ABSOLUTE, RELATIVE):
            raise UsageError(f"Unknown weight '{self.weight}', expected absolute or relative")
        if self.noise < 0:
            raise UsageError("Noise levels must be nonnegative")

        if self.command in TARGET_COMMANDS:
            if len(self.sources) != 1:
                raise UsageError("Give exactly one function source: --fn, --taylor-file, --cheb-file or --samples-file")
        if self.command == 'model':
            if self.samples is None or len(self.sources) != 1:
                raise UsageError("The model command takes its data from --samples-file only")
        if self.samples is not None:
            if self.spline not in SPLINE_KINDS:
                raise UsageError(f"Unknown spline kind '{self.spline}', expected linear or cubic")
            if self.a is not None:
                raise UsageError("A sampled function's domain is [x_1, x_nu]; do not pass --a/--b")

        if self.command in ('approx', 'report') and self.method not in APPROX_METHODS:
            raise UsageError(f"Unknown method '{self.method}', expected one of {', '.join(APPROX_METHODS)}")
        if self.command == 'autocorrect':
            self._validate_autocorrect()
        if self.method == 'remez' and self.seed not in REMEZ_SEEDS:
            raise UsageError(f"Unknown Remez seed '{self.seed}', expected default or pc-linear")
        if self.method == 'pade' and self.command in ('approx', 'report', 'autocorrect'):
            if self.parity not in (None, 'plain'):
                raise UsageError("Padé approximants are built in the plain form")

        if self.command == 'elemfun-check':
            if not self.function:
                raise UsageError("elemfun-check needs --function")
            if self.precision not in PRECISIONS + ('both',):
                raise UsageError(f"Unknown precision '{self.precision}', expected ordinary, enhanced or both")
            if self.form not in ('kernel', 'jacobi'):
                raise UsageError(f"Unknown kernel form '{self.form}', expected kernel or jacobi")
            if self.x is None and self.grid < 1000:
                raise UsageError("The accuracy grid needs at least 1000 points")
        return self

    def _validate_integers(self):
        for key in ('m', 'n'):
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise UsageError(f"{key} must be a nonnegative integer, got {value!r}")
        for key in ('quadrature_nodes', 'checkpoints', 'nodes2', 'n1', 'n2', 'max_cycles'):
            value = getattr(self, key)
            if value is not None and (isinstance(value, bool) or not isinstance(value, int) or value < 1):
                raise UsageError(f"{key} must be a positive integer, got {value!r}")

    def _validate_autocorrect(self):
        if self.method not in AUTOCORRECT_METHODS:
            raise UsageError(f"Unknown method '{self.method}', expected one of {', '.join(AUTOCORRECT_METHODS)}")
        if (self.n1 is None) != (self.n2 is None):
            raise UsageError("Give both Taylor truncations (--N1 and --N2) or neither")
        if self.n1 is not None and self.method not in ('pc-cross', 'pc-nonlinear'):
            raise UsageError("Taylor truncation experiments use the pc-cross or pc-nonlinear method")
        if self.nodes2 is not None and self.method == 'pade':
            raise UsageError("Padé experiments take coefficient noise only")
        if self.normalization2 is not None:
            if self.normalization2 not in NORMALIZATIONS:
                raise UsageError(f"Unknown normalization '{self.normalization2}'")
            if self.method != 'pc-linear':
                raise UsageError("Switching normalization applies to the pc-linear method")
        if self.sweep is not None:
            if self.method not in ('pc-cross', 'pc-nonlinear'):
                raise UsageError("Truncation sweeps use the pc-cross or pc-nonlinear method")
            if len(self.sweep) < 2 or any(not isinstance(N, int) or N < 1 for N in self.sweep):
                raise UsageError("A truncation sweep needs at least two positive term counts")
        if self.level is not None and self.level < 0:
            raise UsageError("Noise levels must be nonnegative")
