"""JSON encodings for complex numbers, matrices, spectra, polygons and codes.

Complex scalars are ``{"re": x, "im": y}``; matrices are
``{"re": [[...]], "im": [[...]]}``.
"""
import json

import numpy as np

from . import geometry as geo
from .codes import CompressionCode
from .spectrum import from_angles, from_matrix


def complex_to_json(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_json(d):
    if isinstance(d, (list, tuple)):
        return complex(d[0], d[1])
    if isinstance(d, (int, float)):
        return complex(d)
    return complex(d["re"], d.get("im", 0.0))


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(d):
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape or re.ndim != 2:
        raise ValueError("matrix 're' and 'im' must be 2-D arrays of one shape")
    return re + 1j * im


def polygon_to_json(poly):
    return {"kind": poly.kind, "vertices": [complex_to_json(v) for v in poly.vertices]}


def polygon_from_json(d):
    return geo.ConvexPolygon(tuple(complex_from_json(v) for v in d["vertices"]), d["kind"])


def spectrum_to_json(spec):
    return {"angles": [float(t) for t in spec.thetas], "unit": "radians"}


def spectrum_from_json(d):
    """Read ``{"angles": [...], "unit": ...}`` or ``{"matrix": {...}}``."""
    if "angles" in d:
        return from_angles(d["angles"], d.get("unit", "radians"))
    if "matrix" in d:
        return from_matrix(matrix_from_json(d["matrix"]))
    raise ValueError("spectrum input needs 'angles' or 'matrix'")


def code_to_json(code: CompressionCode):
    return {
        "lambda": complex_to_json(code.lam),
        "k": code.k,
        "basis": matrix_to_json(code.basis),
        "projection": matrix_to_json(code.projection),
        "residual": code.residual,
        "strategy": code.strategy,
    }


def code_from_json(d):
    basis = matrix_from_json(d["basis"])
    P = matrix_from_json(d["projection"]) if "projection" in d else basis @ basis.conj().T
    return CompressionCode(
        complex_from_json(d["lambda"]), basis, P, float(d.get("residual", np.nan)), d.get("strategy", "")
    )


def _default(o):
    if isinstance(o, complex):
        return complex_to_json(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj):
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)
