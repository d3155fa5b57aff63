"""CSV field export: one row per node, 17 significant digits, LF line endings."""
import csv

import numpy as np

from .elliptic import pde_residual

SOLUTION_COLUMNS = ("r", "u", "phi", "psi", "sub", "V", "Q", "pde_residual")


def _fmt(x):
    return format(float(x), ".17g")


def write_columns(path, columns, header):
    """Write equal-length arrays as CSV under ``header``."""
    arrays = [np.asarray(c, dtype=float) for c in columns]
    n = arrays[0].shape[0]
    if any(a.shape != (n,) for a in arrays):
        raise ValueError("columns must be 1-D arrays of equal length")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*arrays):
            w.writerow([_fmt(x) for x in row])


def export_solution(result, spec, path):
    grid = result.u.grid
    res = pde_residual(result.u, result.phi, spec)
    cols = (grid.r, result.u.values, result.phi.values, result.sup.values, result.sub.values,
            spec.sample_V(grid), spec.sample_Q(grid), res.values)
    write_columns(path, cols, SOLUTION_COLUMNS)


def read_columns(path):
    """Read a numeric CSV with a header row into {name: float array}."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise ValueError(f"{path}: duplicate column names")
    body = [r for r in rows[1:] if r]
    try:
        data = np.array([[float(x) for x in r] for r in body], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric entry ({exc})") from None
    if data.size == 0:
        data = data.reshape(0, len(header))
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: row width does not match header")
    return {name: data[:, j] for j, name in enumerate(header)}
