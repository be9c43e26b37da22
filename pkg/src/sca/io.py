"""CSV and manifest serialization.

CSV files are headerless with 17 significant digits; JSON is used for all
metadata. Every artifact written through :class:`RunRecorder` is listed in
the run manifest.
"""
from __future__ import annotations

import csv
import json
import math
import platform
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .pointcloud import format_float

__all__ = [
    "MANIFEST_SCHEMA",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_json",
    "to_jsonable",
    "RunRecorder",
]

MANIFEST_SCHEMA = "sca/1"


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format_float(v)
    return str(v)


def write_matrix_csv(path, rows):
    """Write a 2-d array or an iterable of rows as headerless CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow([_cell(v) for v in np.atleast_1d(row)])


def read_matrix_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        return np.array([[float(c) for c in row] for row in csv.reader(fh) if row])


def to_jsonable(obj):
    """Recursively convert numpy values; infinities become the string ``"inf"``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, float) and math.isnan(obj):
        return "nan"
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(to_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


class RunRecorder:
    """Collects outputs, warnings and invariant checks for one run."""

    def __init__(self, command: str, config: dict, manifest_path):
        self.command = command
        self.config = config
        self.manifest_path = Path(manifest_path)
        self.outputs: list[str] = []
        self.warnings: list[str] = []
        self.checks: dict = {}

    def csv(self, path, rows):
        write_matrix_csv(path, rows)
        self.outputs.append(str(path))

    def json(self, path, payload):
        write_json(path, payload)
        self.outputs.append(str(path))

    def warn(self, message: str):
        self.warnings.append(str(message))

    def finish(self, status: str = "ok"):
        import scipy

        from . import __version__
        write_json(self.manifest_path, {
            "schema": MANIFEST_SCHEMA,
            "command": self.command,
            "status": status,
            "config": self.config,
            "seed": self.config.get("seed"),
            "outputs": self.outputs,
            "warnings": self.warnings,
            "invariants": self.checks,
            "versions": {"sca": __version__, "numpy": np.__version__,
                         "scipy": scipy.__version__, "python": platform.python_version()},
            "created": datetime.now(timezone.utc).isoformat(),
        })
