"""Delimited and JSON emission: pairs, solutions, sweeps, reports.

All float formatting goes through one shortest-roundtrip formatter so
repeated runs with identical inputs produce byte-identical files.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .errors import GridMismatchError
from .grid import ScalarField
from .pairs import PairField

__all__ = [
    "fmt",
    "write_json",
    "write_pair_csv",
    "read_pair_csv",
    "write_solution",
    "read_solution_pair",
    "SWEEP_HEADER",
    "write_sweep_csv",
]

SWEEP_HEADER = [
    "lambda", "mu", "t", "u_min_sup", "v_min_sup", "u_max_sup", "v_max_sup",
    "count", "rho", "converged",
]


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if np.isnan(x):
        return ""
    return repr(x)


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, float) and np.isnan(obj):
        return None
    return obj


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n")


def write_pair_csv(path, pair):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "u", "v"])
        for x, u, v in zip(pair.grid.x, pair.u.values, pair.v.values):
            writer.writerow([fmt(x), fmt(u), fmt(v)])


def read_pair_csv(path, grid):
    """Pair from a CSV written by write_pair_csv, checked against the grid."""
    rows = []
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [c.strip() for c in header[:3]] != ["x", "u", "v"]:
            raise GridMismatchError(f"{path}: expected header x,u,v")
        for row in reader:
            if row:
                rows.append([float(c) for c in row[:3]])
    data = np.array(rows)
    if data.shape[0] != grid.size:
        raise GridMismatchError(
            f"{path}: {data.shape[0]} rows but the grid has {grid.size} nodes"
        )
    if np.max(np.abs(data[:, 0] - grid.x)) > 1e-10:
        raise GridMismatchError(f"{path}: x column does not match the grid nodes")
    return PairField(ScalarField(grid, data[:, 1]), ScalarField(grid, data[:, 2]))


def _param_tag(value):
    return fmt(float(value)).replace(".", "p").replace("-", "m")


def write_solution(out_dir, record):
    """Solution CSV plus JSON metadata; returns the two paths."""
    out_dir = Path(out_dir)
    stem = f"solution_{_param_tag(record.lam)}_{_param_tag(record.mu)}_{record.origin}"
    csv_path = out_dir / f"{stem}.csv"
    meta_path = out_dir / f"{stem}.json"
    write_pair_csv(csv_path, record.pair)
    write_json(meta_path, record.meta_dict())
    return csv_path, meta_path


def read_solution_pair(csv_path, grid):
    return read_pair_csv(csv_path, grid)


def write_sweep_csv(path, rows):
    """Sweep table with the fixed header; rows are dicts keyed by it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow([fmt(row.get(col)) for col in SWEEP_HEADER])
