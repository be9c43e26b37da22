"""Point clouds: synthetic generators, CSV ingestion and text featurization.

Every generator draws from ``numpy.random.default_rng(seed)`` so a fixed
``GeneratorSpec`` reproduces the same cloud bit for bit.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import DegenerateMarginError, ParameterError, ParseError

__all__ = [
    "PointCloud",
    "GeneratorSpec",
    "GENERATOR_KINDS",
    "generate",
    "spiral_point",
    "mutual_information_features",
    "read_points_csv",
    "write_points_csv",
    "load_generator_spec",
]

GENERATOR_KINDS = (
    "gaussian_mixture",
    "spiral",
    "parallel_lines",
    "two_point_masses",
    "ring_blob_noise",
)


@dataclass(frozen=True)
class PointCloud:
    """n sample points in R^d, optionally tagged with integer labels."""

    points: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ParameterError("points must be a non-empty n x d array")
        if not np.all(np.isfinite(pts)):
            raise ParameterError("points contain non-finite coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=int).ravel()
            if lab.shape[0] != pts.shape[0]:
                raise ParameterError(
                    f"{lab.shape[0]} labels for {pts.shape[0]} points")
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def subset(self, index) -> "PointCloud":
        index = np.asarray(index, dtype=int)
        labels = None if self.labels is None else self.labels[index]
        return PointCloud(self.points[index], labels)


@dataclass(frozen=True)
class GeneratorSpec:
    """Which distribution to sample, its parameters, and the RNG seed.

    Parameters per kind (defaults in brackets):

    gaussian_mixture
        ``means`` (list of scalars or of d-vectors) [-2, 2], ``sds`` [1, 1],
        ``weights`` [uniform].
    spiral
        ``a`` [0.8], ``b`` [10], ``beta`` exponential noise mean [0],
        ``t_min`` [pi/(2b)], ``t_max`` [3 pi / b].
    parallel_lines
        ``length`` [pi], ``separation`` [1], ``weights`` [0.5, 0.5].
    two_point_masses
        ``locations`` [0, 1], ``weights`` [0.5, 0.5], ``jitter`` sd [0].
    ring_blob_noise
        ``radius`` [2], ``ring_sd`` [0.1], ``blob_sd`` [0.3],
        ``noise_fraction`` [0.1], ``weights`` of ring and blob [0.5, 0.5].
        Illustrative defaults only.
    """

    kind: str
    parameters: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ParameterError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "parameters", dict(self.parameters))
        _validate(self)

    def param(self, name, default):
        return self.parameters.get(name, default)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "parameters": _jsonable(self.parameters),
                "seed": self.seed}


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _weights(value, k, name="weights"):
    if value is None:
        return np.full(k, 1.0 / k)
    w = np.asarray(value, dtype=float).ravel()
    if w.shape[0] != k:
        raise ParameterError(f"{name} has {w.shape[0]} entries, expected {k}")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
        raise ParameterError(f"{name} must be nonnegative and sum to 1")
    return w


def _mixture_params(spec):
    means = np.asarray(spec.param("means", [-2.0, 2.0]), dtype=float)
    if means.ndim == 1:
        means = means[:, None]
    k, d = means.shape
    sds = np.asarray(spec.param("sds", np.ones(k)), dtype=float)
    if sds.ndim == 0:
        sds = np.full(k, float(sds))
    if sds.ndim == 1:
        if sds.shape[0] != k:
            raise ParameterError(f"sds has {sds.shape[0]} entries, expected {k}")
        sds = np.repeat(sds[:, None], d, axis=1)
    if sds.shape != (k, d):
        raise ParameterError("sds must be per-component or per-component-per-dim")
    if np.any(sds <= 0):
        raise ParameterError("all standard deviations must be positive")
    weights = _weights(spec.param("weights", None), k)
    return means, sds, weights


def _spiral_params(spec):
    a = float(spec.param("a", 0.8))
    b = float(spec.param("b", 10.0))
    beta = float(spec.param("beta", 0.0))
    if b <= 0:
        raise ParameterError("spiral frequency b must be positive")
    t_min = float(spec.param("t_min", math.pi / (2 * b)))
    t_max = float(spec.param("t_max", 3 * math.pi / b))
    if beta < 0:
        raise ParameterError("spiral noise mean beta must be >= 0")
    if not 0 <= t_min < t_max:
        raise ParameterError("spiral needs 0 <= t_min < t_max")
    return a, b, beta, t_min, t_max


def _validate(spec):
    kind = spec.kind
    if kind == "gaussian_mixture":
        _mixture_params(spec)
    elif kind == "spiral":
        _spiral_params(spec)
    elif kind == "parallel_lines":
        if float(spec.param("length", math.pi)) <= 0:
            raise ParameterError("line length must be positive")
        _weights(spec.param("weights", None), 2)
    elif kind == "two_point_masses":
        locs = np.asarray(spec.param("locations", [0.0, 1.0]), dtype=float)
        _weights(spec.param("weights", None), locs.shape[0])
        if float(spec.param("jitter", 0.0)) < 0:
            raise ParameterError("jitter must be >= 0")
    elif kind == "ring_blob_noise":
        for name, default in (("radius", 2.0), ("ring_sd", 0.1), ("blob_sd", 0.3)):
            if float(spec.param(name, default)) <= 0:
                raise ParameterError(f"{name} must be positive")
        frac = float(spec.param("noise_fraction", 0.1))
        if not 0 <= frac < 1:
            raise ParameterError("noise_fraction must lie in [0, 1)")
        _weights(spec.param("weights", None), 2)


def spiral_point(t, a=0.8, b=10.0):
    """Noiseless spiral ``(t^a cos bt, t^a sin bt)``; accepts arrays."""
    t = np.asarray(t, dtype=float)
    r = t ** a
    return np.stack([r * np.cos(b * t), r * np.sin(b * t)], axis=-1)


def generate(spec: GeneratorSpec, n: int) -> PointCloud:
    """Draw ``n`` i.i.d. points from the distribution described by ``spec``."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    rng = np.random.default_rng(spec.seed)
    kind = spec.kind

    if kind == "gaussian_mixture":
        means, sds, weights = _mixture_params(spec)
        comp = rng.choice(len(weights), size=n, p=weights)
        pts = means[comp] + sds[comp] * rng.standard_normal((n, means.shape[1]))
        return PointCloud(pts, comp)

    if kind == "spiral":
        a, b, beta, t_min, t_max = _spiral_params(spec)
        t = rng.uniform(t_min, t_max, size=n)
        pts = spiral_point(t, a, b)
        if beta > 0:
            pts = pts + rng.exponential(beta, size=(n, 2))
        return PointCloud(pts)

    if kind == "parallel_lines":
        length = float(spec.param("length", math.pi))
        sep = float(spec.param("separation", 1.0))
        weights = _weights(spec.param("weights", None), 2)
        line = rng.choice(2, size=n, p=weights)
        pos = rng.uniform(0.0, length, size=n)
        return PointCloud(np.column_stack([line * sep, pos]), line)

    if kind == "two_point_masses":
        locs = np.asarray(spec.param("locations", [0.0, 1.0]), dtype=float)
        if locs.ndim == 1:
            locs = locs[:, None]
        weights = _weights(spec.param("weights", None), locs.shape[0])
        which = rng.choice(locs.shape[0], size=n, p=weights)
        pts = locs[which].copy()
        jitter = float(spec.param("jitter", 0.0))
        if jitter > 0:
            pts += jitter * rng.standard_normal(pts.shape)
        return PointCloud(pts, which)

    # ring_blob_noise
    radius = float(spec.param("radius", 2.0))
    ring_sd = float(spec.param("ring_sd", 0.1))
    blob_sd = float(spec.param("blob_sd", 0.3))
    frac = float(spec.param("noise_fraction", 0.1))
    weights = _weights(spec.param("weights", None), 2)
    n_noise = int(round(frac * n))
    part = rng.choice(2, size=n - n_noise, p=weights)
    n_ring = int(np.sum(part == 0))
    theta = rng.uniform(0, 2 * np.pi, size=n_ring)
    r = radius + ring_sd * rng.standard_normal(n_ring)
    ring = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    blob = blob_sd * rng.standard_normal((n - n_noise - n_ring, 2))
    box = 1.5 * radius
    noise = rng.uniform(-box, box, size=(n_noise, 2))
    pts = np.vstack([ring, blob, noise])
    labels = np.concatenate([np.zeros(n_ring, int), np.ones(len(blob), int),
                             np.full(n_noise, 2)])
    return PointCloud(pts, labels)


def mutual_information_features(counts):
    """Pointwise mutual information between documents (rows) and words (columns).

    Parameters
    ----------
    counts : array-like, shape (p, n)
        ``counts[x, y]`` is how often word ``y`` occurs in document ``x``.

    Returns
    -------
    info : ndarray, shape (p, n)
        ``log(f[x, y] / (sum_xi f[xi, y] * sum_eta f[x, eta]))`` with
        ``f = counts / counts.sum()``. Column ``y`` is the feature vector of
        word ``y``; use ``PointCloud(info.T)`` to embed the words.
    floored : ndarray of bool, shape (p, n)
        Cells with zero count, evaluated with ``f`` floored at ``1/(2 total)``.
    """
    c = np.asarray(counts)
    if c.ndim != 2:
        raise ParameterError("counts must be a 2-d matrix")
    if np.any(c < 0):
        raise ParameterError("counts must be nonnegative")
    if np.any(c.sum(axis=1) == 0):
        raise DegenerateMarginError(
            f"documents {np.flatnonzero(c.sum(axis=1) == 0).tolist()} have no words")
    if np.any(c.sum(axis=0) == 0):
        raise DegenerateMarginError(
            f"words {np.flatnonzero(c.sum(axis=0) == 0).tolist()} never occur")
    total = c.sum()
    f = c / total
    doc_margin = f.sum(axis=1, keepdims=True)
    word_margin = f.sum(axis=0, keepdims=True)
    floored = c == 0
    f = np.where(floored, 0.5 / total, f)
    return np.log(f / (word_margin * doc_margin)), floored


def read_points_csv(path, labels: bool = False) -> PointCloud:
    """Read a headerless numeric CSV, one point per row.

    With ``labels=True`` the final column is parsed as an integer label.
    """
    rows, tags = [], []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"expected {width} columns, got {len(row)}", lineno)
            try:
                values = [float(cell) for cell in row]
            except ValueError as exc:
                raise ParseError(f"non-numeric cell ({exc})", lineno) from None
            if labels:
                if len(values) < 2:
                    raise ParseError("label column requires at least 2 columns", lineno)
                if values[-1] != int(values[-1]):
                    raise ParseError("label column must hold integers", lineno)
                tags.append(int(values[-1]))
                values = values[:-1]
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return PointCloud(np.array(rows), np.array(tags) if labels else None)


def format_float(x) -> str:
    return format(float(x), ".17g")


def write_points_csv(path, cloud: PointCloud, labels: bool = True):
    """Write ``cloud`` as headerless CSV; labels appended when present."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for i in range(cloud.n):
            row = [format_float(v) for v in cloud.points[i]]
            if labels and cloud.labels is not None:
                row.append(str(int(cloud.labels[i])))
            writer.writerow(row)


def load_generator_spec(path) -> GeneratorSpec:
    """Load a ``GeneratorSpec`` from a JSON file.

    Schema: ``{"kind": str, "parameters": {...}, "seed": int}``.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", exc.lineno) from None
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ParseError(f"{path}: expected an object with a 'kind' key")
    unknown = set(raw) - {"kind", "parameters", "seed"}
    if unknown:
        raise ParseError(f"{path}: unknown keys {sorted(unknown)}")
    return GeneratorSpec(raw["kind"], raw.get("parameters", {}), int(raw.get("seed", 0)))
