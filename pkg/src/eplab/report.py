"""Deterministic report emission: JSON verdicts and CSV curve tables."""

from __future__ import annotations

import json
import os

import numpy as np

__all__ = ["Verdict", "emit_json", "emit_csv", "sanitize"]

CSV_FMT = "%.17g"


class Verdict(dict):
    """A named check with value, tolerance/window, and pass flag."""

    def __init__(self, name, passed, value=None, tolerance=None, **extra):
        super().__init__(name=name, passed=bool(passed), **extra)
        if value is not None:
            self["value"] = sanitize(value)
        if tolerance is not None:
            self["tolerance"] = sanitize(tolerance)


def sanitize(obj):
    """Make numpy scalars/arrays JSON-serializable, deterministically."""
    if isinstance(obj, dict):
        return {k: sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return {"re": float(np.real(obj)), "im": float(np.imag(obj))}
    if isinstance(obj, np.ndarray):
        return [sanitize(v) for v in obj.tolist()]
    return obj


def emit_json(payload: dict, path: str) -> None:
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    text = json.dumps(sanitize(payload), sort_keys=True,
                      separators=(",", ":"), allow_nan=True)
    with open(path, "w") as fh:
        fh.write(text)
        fh.write("\n")


def emit_csv(columns: dict, path: str) -> None:
    """Column-oriented CSV at 17 significant digits."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    names = list(columns)
    rows = len(next(iter(columns.values())))
    for name in names:
        if len(columns[name]) != rows:
            raise ValueError(f"column {name} has inconsistent length")
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(rows):
            cells = []
            for name in names:
                v = columns[name][i]
                if isinstance(v, (complex, np.complexfloating)) and np.imag(v) != 0:
                    raise ValueError(
                        f"column {name} holds complex values; split re/im")
                cells.append(CSV_FMT % float(np.real(v)))
            fh.write(",".join(cells) + "\n")
