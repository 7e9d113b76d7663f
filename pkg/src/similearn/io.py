"""CSV and JSON file handling.

Matrices travel as plain CSV with no header, one row per line, floats
written with enough digits to round-trip exactly. Labels are a
single-column CSV of integers. Parse errors always carry the offending
line number.
"""

import csv
import json

import numpy as np

from .errors import DataFormatError

# %.17g round-trips any IEEE double through text exactly
FLOAT_FMT = "%.17g"


def read_matrix(path) -> np.ndarray:
    """Read a 2-D numeric CSV; rejects ragged rows and non-finite values."""
    rows = []
    width = None
    with open(path, newline="") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row or all(x.strip() == "" for x in row):
                continue
            try:
                vals = [float(x) for x in row]
            except ValueError:
                raise DataFormatError(
                    f"{path}: non-numeric value on line {lineno}", line=lineno
                ) from None
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise DataFormatError(
                    f"{path}: line {lineno} has {len(vals)} columns, expected {width}",
                    line=lineno,
                )
            if not all(np.isfinite(v) for v in vals):
                raise DataFormatError(
                    f"{path}: non-finite value on line {lineno}", line=lineno
                )
            rows.append(vals)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def write_matrix(path, M):
    np.savetxt(path, np.atleast_2d(M), delimiter=",", fmt=FLOAT_FMT)


def read_labels(path) -> np.ndarray:
    """Read a single-column CSV of integer class ids."""
    M = read_matrix(path)
    if M.shape[1] != 1:
        raise DataFormatError(f"{path}: labels must be a single column")
    vals = M[:, 0]
    if not np.all(vals == np.round(vals)):
        bad = int(np.flatnonzero(vals != np.round(vals))[0]) + 1
        raise DataFormatError(f"{path}: non-integer label on line {bad}", line=bad)
    return vals.astype(int)


def write_labels(path, labels):
    np.savetxt(path, np.asarray(labels, dtype=int).reshape(-1, 1), fmt="%d")


def read_json(path):
    with open(path) as f:
        return json.load(f)


def write_json(path, obj):
    with open(path, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")
