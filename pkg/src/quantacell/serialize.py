"""File formats: complex matrices and states as JSON, time series as CSV.

A matrix file is {"dim": d, "entries": [[re, im], ...]} with dim^2 entries in
row-major order; a state file carries dim entries. Floats are written through
repr, which round-trips exactly, so rereading a file reproduces the array bit
for bit.
"""

from __future__ import annotations

import csv
import json

import numpy as np

__all__ = [
    "matrix_to_obj",
    "matrix_from_obj",
    "state_to_obj",
    "state_from_obj",
    "save_matrix",
    "load_matrix",
    "save_state",
    "load_state",
    "write_series_csv",
]


def _pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in values]


def _complex_array(entries, count: int, what: str) -> np.ndarray:
    if len(entries) != count:
        raise ValueError(f"{what}: expected {count} entries, got {len(entries)}")
    out = np.empty(count, dtype=complex)
    for i, pair in enumerate(entries):
        if len(pair) != 2:
            raise ValueError(f"{what}: entry {i} is not a [re, im] pair")
        out[i] = complex(float(pair[0]), float(pair[1]))
    return out


def matrix_to_obj(m) -> dict:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return {"dim": int(a.shape[0]), "entries": _pairs(a.reshape(-1))}


def matrix_from_obj(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")
    flat = _complex_array(obj["entries"], dim * dim, "matrix")
    return flat.reshape(dim, dim)


def state_to_obj(v) -> dict:
    a = np.asarray(v, dtype=complex).reshape(-1)
    return {"dim": int(a.shape[0]), "entries": _pairs(a)}


def state_from_obj(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")
    return _complex_array(obj["entries"], dim, "state")


def save_matrix(path, m) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_obj(m), fh)
        fh.write("\n")


def load_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_obj(json.load(fh))


def save_state(path, v) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_obj(v), fh)
        fh.write("\n")


def load_state(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return state_from_obj(json.load(fh))


def write_series_csv(path, header: tuple, rows) -> None:
    """One header line, then rows of repr-formatted values."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
