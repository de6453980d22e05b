"""
Readers for coefficient and sample files
Fortran-style kernel tables, one-value-per-line coefficient lists and sample tables
"""

import json
import re
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from app.models.kernels import JACOBI_SYMBOLS, KERNEL_SYMBOLS, JacobiCoeffs, KernelCoeffs, check_precision
from app.models.target import SampleTable

KERNEL_TABLE = Path(__file__).resolve().parent.parent / 'data' / 'kernel_coefficients.txt'

_FORTRAN_NUMBER = re.compile(r'^\s*(-)?\s*(\d+\.\d*)(?:\s*[DdEe]\s*([+-]?)\s*(\d+))?\s*$')
_SECTION = re.compile(r'^\[(\w+)\s+(\w+)\]$')

PathLike = Union[str, Path]


def parse_fortran_number(text: str) -> float:
    """'-  0.2655808794660000D 01' -> -2.65580879466

    The sign sits in its own column and the exponent follows the letter D.
    """
    match = _FORTRAN_NUMBER.match(text)
    if not match:
        raise ValueError(f"Not a D-format number: {text!r}")
    sign, mantissa, exponent_sign, exponent = match.groups()
    value = float(mantissa)
    if exponent is not None:
        value *= 10.0 ** (int(exponent) * (-1 if exponent_sign == '-' else 1))
    return -value if sign else value


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].rstrip()
        if line.strip():
            yield number, line


def parse_kernel_table(text: str) -> Dict[Tuple[str, str], Tuple[KernelCoeffs, JacobiCoeffs]]:
    """Sections '[function precision]' holding the kernel block, '***' and the Jacobi block"""
    sections: Dict[Tuple[str, str], List[List[float]]] = {}
    current: Optional[Tuple[str, str]] = None
    for number, line in _content_lines(text):
        header = _SECTION.match(line.strip())
        if header:
            current = (header.group(1), check_precision(header.group(2)))
            sections[current] = [[]]
            continue
        if current is None:
            raise ValueError(f"Line {number}: value outside a [function precision] section")
        if line.strip() == '***':
            sections[current].append([])
            continue
        try:
            sections[current][-1].append(parse_fortran_number(line))
        except ValueError as e:
            raise ValueError(f"Line {number}: {e}") from e

    table = {}
    for (function, precision), blocks in sections.items():
        if len(blocks) != 2:
            raise ValueError(f"Section {function}/{precision} needs a kernel block and a Jacobi block")
        kernel_symbols, jacobi_symbols = KERNEL_SYMBOLS[precision], JACOBI_SYMBOLS[precision]
        kernel, jacobi = blocks
        if len(kernel) != len(kernel_symbols) or len(jacobi) != len(jacobi_symbols):
            raise ValueError(f"Section {function}/{precision} has {len(kernel)}+{len(jacobi)} values, "
                             f"expected {len(kernel_symbols)}+{len(jacobi_symbols)}")
        table[(function, precision)] = (
            KernelCoeffs(function, precision, dict(zip(kernel_symbols, kernel))),
            JacobiCoeffs(function, precision, dict(zip(jacobi_symbols, jacobi)))
        )
    return table


@lru_cache(maxsize=4)
def load_kernel_table(path: Optional[str] = None) -> Dict[Tuple[str, str], Tuple[KernelCoeffs, JacobiCoeffs]]:
    """Published kernel coefficients keyed by (function, precision)"""
    source = Path(path) if path else KERNEL_TABLE
    return parse_kernel_table(source.read_text(encoding='utf-8'))


def read_coefficient_list(path: PathLike) -> List[float]:
    """One value per line; '#' starts a comment; D or E exponents accepted"""
    values = []
    for number, line in _content_lines(Path(path).read_text(encoding='utf-8')):
        try:
            values.append(parse_fortran_number(line) if re.search(r'[Dd]', line) else float(line))
        except ValueError as e:
            raise ValueError(f"{path}, line {number}: cannot read {line.strip()!r}") from e
    if not values:
        raise ValueError(f"{path} holds no coefficients")
    return values


def read_sample_table(path: PathLike) -> SampleTable:
    """Two whitespace-separated columns, or JSON {"points": [[x, y], ...]} / {"x": [...], "y": [...]}"""
    path = Path(path)
    text = path.read_text(encoding='utf-8')
    if path.suffix.lower() == '.json' or text.lstrip().startswith('{'):
        document = json.loads(text)
        if 'points' in document:
            return SampleTable.from_points(document['points'], name=path.stem)
        if 'x' in document and 'y' in document:
            return SampleTable(document['x'], document['y'], name=path.stem)
        raise ValueError(f"{path}: expected 'points' or 'x'/'y' keys")

    points = []
    for number, line in _content_lines(text):
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"{path}, line {number}: expected two columns, got {len(fields)}")
        try:
            points.append((float(fields[0]), float(fields[1])))
        except ValueError as e:
            raise ValueError(f"{path}, line {number}: {e}") from e
    return SampleTable.from_points(points, name=path.stem)
