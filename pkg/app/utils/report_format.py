"""
Report formatting helpers
Line-oriented text reports, the machine-readable document and the error-curve file
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from app.models.rational import RationalApproximant
from app.models.reports import ApproxReport

PathLike = Union[str, Path]


def _plain(value: Any) -> Any:
    """numpy scalars/arrays and tuples as JSON-ready Python values; non-finite floats as strings"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if hasattr(value, 'to_dict'):
        return _plain(value.to_dict())
    return value


def coefficient_block(r: RationalApproximant) -> Dict[str, Any]:
    """Coefficients with b0 = 1 and with a_n = 1 (m = 0) or b_m = 1 (m > 0)"""
    m, n = r.degrees
    block = {
        'parity': r.parity,
        'domain': r.domain.to_dict(),
        'm': m,
        'n': n
    }
    first = r.normalized('b0')
    block['b0'] = {'numerator': list(first.numerator.coeffs), 'denominator': list(first.denominator.coeffs)}
    second_kind = 'an' if m == 0 else 'bm'
    try:
        second = r.normalized(second_kind)
        block[second_kind] = {'numerator': list(second.numerator.coeffs),
                              'denominator': list(second.denominator.coeffs)}
    except ValueError:
        block[second_kind] = None
    return block


def document(**sections: Any) -> str:
    """Machine-readable report: sorted keys, shortest round-trip floats, no timestamps"""
    return json.dumps(_plain(sections), sort_keys=True, indent=2) + '\n'


def _number(value: Optional[float]) -> str:
    return 'n/a' if value is None else f"{value:.6e}"


def text_block(report: ApproxReport, title: str = 'Error report') -> str:
    """Human-readable summary of an ApproxReport"""
    lines = [
        title,
        f"  absolute error   {_number(report.abs_error)}",
        f"  relative error   {_number(report.rel_error)}",
        f"  weight           {report.weight}",
        f"  condition        {_number(report.condition)}",
        f"  alternation      {'yes' if report.alternation else 'no'} ({len(report.extrema)} extrema)",
        f"  quality q        {_number(report.q)}",
        f"  lower bound      {_number(report.lower_bound)}",
        f"  checkpoints      {report.checkpoints}"
    ]
    if report.excluded_points:
        lines.append(f"  excluded points  {report.excluded_points}")
    return '\n'.join(lines)


def coefficient_text(r: RationalApproximant) -> str:
    block = coefficient_block(r)
    lines = [f"Approximant m={block['m']} n={block['n']} ({block['parity']}) on "
             f"[{block['domain']['a']!r}, {block['domain']['b']!r}]"]
    for kind in ('b0', 'bm', 'an'):
        if kind not in block:
            continue
        lines.append(f"  normalization {kind} = 1")
        if block[kind] is None:
            lines.append("    (not available: coefficient vanishes)")
            continue
        for i, a in enumerate(block[kind]['numerator']):
            lines.append(f"    a{i:<3d} {a: .17e}")
        for j, b in enumerate(block[kind]['denominator']):
            lines.append(f"    b{j:<3d} {b: .17e}")
    return '\n'.join(lines)


def write_curve(path: PathLike, xs: Sequence[float], abs_err: Sequence[float],
                rel_err: Sequence[float]) -> Path:
    """Three columns x, Delta(x), delta(x) with 17 significant digits"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.column_stack([np.asarray(xs, dtype=float), np.asarray(abs_err, dtype=float),
                            np.asarray(rel_err, dtype=float)])
    np.savetxt(path, data, fmt='%.17e', header='x abs_error rel_error')
    return path


def rows_text(rows: List[Dict[str, Any]], columns: Sequence[str]) -> str:
    """Fixed-width table of dict rows"""
    header = '  '.join(f"{c:>14s}" for c in columns)
    lines = [header]
    for row in rows:
        cells = []
        for c in columns:
            value = row.get(c)
            if isinstance(value, float):
                cells.append(f"{value:>14.4e}")
            else:
                cells.append(f"{str(value):>14s}")
        lines.append('  '.join(cells))
    return '\n'.join(lines)
