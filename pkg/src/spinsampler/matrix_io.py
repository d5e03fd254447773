"""JSON serialization for complex matrices.

The repo-wide format is a flat object

    {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}

with ``re`` and ``im`` as row-major nested lists of shape rows x cols.
Readers reject any shape mismatch instead of broadcasting.
"""

from __future__ import annotations

import json

import numpy as np

from .linalg import as_complex_matrix


def matrix_to_payload(a) -> dict:
    m = as_complex_matrix(a)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_payload(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValueError("matrix payload must be a JSON object")
    missing = {"rows", "cols", "re", "im"} - set(obj)
    if missing:
        raise ValueError(f"matrix payload is missing fields: {sorted(missing)}")
    rows, cols = obj["rows"], obj["cols"]
    if isinstance(rows, bool) or isinstance(cols, bool) \
            or not isinstance(rows, int) or not isinstance(cols, int) \
            or rows < 0 or cols < 0:
        raise ValueError("rows and cols must be nonnegative integers")
    parts = []
    for key in ("re", "im"):
        block = obj[key]
        if not isinstance(block, list) or len(block) != rows:
            raise ValueError(f"field {key!r} must hold exactly {rows} rows")
        for row in block:
            if not isinstance(row, list) or len(row) != cols:
                raise ValueError(f"every row of {key!r} must hold exactly {cols} entries")
        parts.append(np.array(block, dtype=float).reshape(rows, cols))
    return as_complex_matrix(parts[0] + 1j * parts[1])


def write_matrix(path, a) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_payload(a), fh)
        fh.write("\n")


def read_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_payload(json.load(fh))
