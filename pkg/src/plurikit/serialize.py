"""CSV and JSON formats for sample sets, measures, polynomials and result tables.

Floats are written with 17 significant digits and LF line endings, so output
is byte-identical wherever the arithmetic is.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import InputError
from .geometry import DiscreteMeasure, WeightedSampleSet
from .polyalg import Basis, MultiIndex, Poly

FLOAT_FORMAT = "%.17g"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return FLOAT_FORMAT % float(x)
    if isinstance(x, (tuple, list, MultiIndex)):
        return " ".join(fmt(v) for v in x)
    return str(x)


def table_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _point_header(dim):
    return [h for k in range(1, dim + 1) for h in (f"re(x{k})", f"im(x{k})")]


def _point_columns(points):
    pts = np.asarray(points, dtype=complex)
    return np.stack([pts.real, pts.imag], axis=2).reshape(pts.shape[0], -1)


def sample_set_to_csv(E: WeightedSampleSet) -> str:
    data = np.hstack([_point_columns(E.points), E.weights[:, None]])
    return table_to_csv(_point_header(E.dim) + ["weight"], data.tolist())


def measure_to_csv(mu: DiscreteMeasure) -> str:
    data = np.hstack([_point_columns(mu.points), mu.masses[:, None]])
    return table_to_csv(_point_header(mu.points.shape[1]) + ["mass"], data.tolist())


def _read_points(text, last):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise InputError("empty CSV")
    header = rows[0]
    if len(header) < 3 or len(header) % 2 != 1 or header[-1] != last:
        raise InputError(f"CSV header must read re(x1), im(x1), ..., {last}")
    dim = (len(header) - 1) // 2
    if header[:-1] != _point_header(dim):
        raise InputError(f"CSV header must read re(x1), im(x1), ..., {last}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float).reshape(-1, len(header))
    except ValueError as exc:
        raise InputError(f"bad number in CSV: {exc}") from None
    pts = data[:, 0:-1:2] + 1j * data[:, 1:-1:2]
    return pts, data[:, -1]


def sample_set_from_csv(text: str, real_only: bool | None = None) -> WeightedSampleSet:
    """Inverse of ``sample_set_to_csv``; real_only defaults to "no imaginary parts"."""
    pts, w = _read_points(text, "weight")
    if real_only is None:
        real_only = bool(np.all(pts.imag == 0))
    return WeightedSampleSet(pts, w, real_only=real_only)


def measure_from_csv(text: str) -> DiscreteMeasure:
    pts, m = _read_points(text, "mass")
    return DiscreteMeasure(pts, m)


def poly_to_json(p: Poly) -> dict:
    """``{"dim", "terms": [{"alpha", "re", "im"}], "basis"}``; ``basis`` is null for plain monomials."""
    terms = [
        {"alpha": list(b), "re": complex(c).real, "im": complex(c).imag}
        for b, c in sorted(p.terms.items())
    ]
    return {"dim": p.dim, "terms": terms, "basis": p.basis.to_json()}


def poly_from_json(obj) -> Poly:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        terms = {MultiIndex(t["alpha"]): complex(t["re"], t.get("im", 0.0)) for t in obj["terms"]}
        return Poly(int(obj["dim"]), terms, Basis.from_json(obj.get("basis")))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed polynomial JSON: {exc}") from None


__all__ = [
    "fmt", "table_to_csv", "sample_set_to_csv", "sample_set_from_csv", "measure_to_csv", "measure_from_csv",
    "poly_to_json", "poly_from_json", "FLOAT_FORMAT",
]
