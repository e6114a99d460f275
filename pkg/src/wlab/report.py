"""JSON-lines serialisation shared by the CLI and the predictor tables.

Floats are written with 17 significant digits so that reports replay exactly
as golden files.  Non-finite floats become null.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np


def _encode(obj) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating, Fraction)):
        x = float(obj)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "to_dict"):
        return _encode(obj.to_dict())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """One-line JSON text with 17-digit floats."""
    return _encode(obj)


def table_to_json(table) -> list:
    return [[None if cell is None else cell.to_dict() for cell in row] for row in table]
