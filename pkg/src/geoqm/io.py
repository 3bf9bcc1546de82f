"""Matrix JSON format: ``{"dim": n, "re": [[...]], "im": [[...]]}``.

Bipartite operators add ``"dims": [n, m]``; frame functions add ``"kappa"``.
"""

from __future__ import annotations

import json

import numpy as np

from .linalg import ValidationError


def matrix_to_json(a, dims=None) -> dict:
    a = np.asarray(a, dtype=complex)
    out = {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}
    if dims is not None:
        out["dims"] = [int(d) for d in dims]
    return out


def _grid(obj, key, n):
    if key not in obj:
        raise ValidationError(f"missing field '{key}'")
    try:
        arr = np.asarray(obj[key], dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"field '{key}' must be an {n}x{n} array of numbers "
                              "(non-numeric or ragged entries)") from None
    if arr.shape != (n, n):
        raise ValidationError(f"field '{key}' must be a {n}x{n} array, got shape {arr.shape}")
    return arr


def matrix_from_json(obj) -> tuple[np.ndarray, tuple[int, int] | None]:
    """Parse the matrix format; returns ``(matrix, dims or None)``."""
    if not isinstance(obj, dict):
        raise ValidationError("matrix JSON must be an object")
    if "dim" not in obj:
        raise ValidationError("missing field 'dim'")
    try:
        n = int(obj["dim"])
    except (TypeError, ValueError):
        raise ValidationError("field 'dim' must be an integer") from None
    if n < 1:
        raise ValidationError("field 'dim' must be positive")
    re = _grid(obj, "re", n)
    im = _grid(obj, "im", n) if "im" in obj else np.zeros((n, n))
    dims = None
    if "dims" in obj:
        d = obj["dims"]
        if not (isinstance(d, list) and len(d) == 2):
            raise ValidationError("field 'dims' must be [n, m]")
        dims = (int(d[0]), int(d[1]))
        if dims[0] * dims[1] != n:
            raise ValidationError(f"dims {list(dims)} do not multiply to dim {n}")
    return re + 1j * im, dims


def load_matrix(path) -> tuple[np.ndarray, tuple[int, int] | None]:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    return matrix_from_json(obj)


def dump(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    raise TypeError(f"not JSON serializable: {type(o).__name__}")
