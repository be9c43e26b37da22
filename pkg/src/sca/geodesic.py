"""Shortest-path graph distances and the noisy-spiral experiments.

The experiments contrast the shortest-path distance on a threshold graph
with the diffusion distance computed on the same 0/1 adjacency, between two
reference points on adjacent arms of the spiral ``(t^a cos bt, t^a sin bt)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from .diffusion import diffusion_distance_direct
from .errors import ParameterError
from .kernelgraph import EpsilonGraph, adjacency_kernel, epsilon_graph
from .markov import build_markov
from .pointcloud import GeneratorSpec, generate, spiral_point

__all__ = [
    "GeodesicResult",
    "graph_distance",
    "SpiralConfig",
    "reference_points",
    "spiral_realization",
    "SensitivityResult",
    "spiral_sensitivity_experiment",
    "ConsistencyResult",
    "spiral_consistency_experiment",
    "histogram_modes",
    "MANIFOLD_DISTANCE",
    "EUCLIDEAN_DISTANCE",
]

MANIFOLD_DISTANCE = 3.46
EUCLIDEAN_DISTANCE = 0.60


@dataclass(frozen=True)
class GeodesicResult:
    distance: float
    path: tuple
    connected: bool


def graph_distance(graph: EpsilonGraph, a: int, b: int) -> GeodesicResult:
    """Shortest path between vertices ``a`` and ``b`` (Dijkstra)."""
    n = graph.vertices
    if not (0 <= a < n and 0 <= b < n):
        raise ParameterError(f"vertex indices must lie in 0..{n - 1}")
    if a == b:
        return GeodesicResult(0.0, (a,), True)
    dist, pred = dijkstra(graph.to_csr(), directed=False, indices=a,
                          return_predecessors=True)
    if not np.isfinite(dist[b]):
        return GeodesicResult(math.inf, (), False)
    path = [b]
    while path[-1] != a:
        path.append(int(pred[path[-1]]))
    return GeodesicResult(float(dist[b]), tuple(reversed(path)), True)


@dataclass(frozen=True)
class SpiralConfig:
    """Parameters shared by both spiral experiments.

    ``ns`` is used by the consistency experiment only; ``n`` by the
    sensitivity experiment. ``m`` is the diffusion step count on the 0/1
    adjacency chain.
    """

    a: float = 0.8
    b: float = 10.0
    beta: float = 0.09
    tau: float = 0.15
    n: int = 800
    ns: tuple = (600, 2000, 4000)
    reps: int = 100
    baseline_reps: int = 100
    m: int = 50
    seed: int = 0
    t_min: float | None = None
    t_max: float | None = None

    def generator(self, beta, seed) -> GeneratorSpec:
        params = {"a": self.a, "b": self.b, "beta": beta}
        if self.t_min is not None:
            params["t_min"] = self.t_min
        if self.t_max is not None:
            params["t_max"] = self.t_max
        return GeneratorSpec("spiral", params, seed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ns"] = list(self.ns)
        return d


def reference_points(a=0.8, b=10.0):
    """Points A and B at ``t = pi/(2b)`` and ``t = 5 pi/(2b)``."""
    return spiral_point([math.pi / (2 * b), 5 * math.pi / (2 * b)], a, b)


def _derived_seed(*parts) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def spiral_realization(config: SpiralConfig, n: int, tau: float, beta: float, seed: int,
                       with_diffusion: bool = True) -> dict:
    """One sampled spiral: geodesic and (optionally) diffusion distance A-B."""
    cloud = generate(config.generator(beta, seed), n)
    ref = reference_points(config.a, config.b)
    _, (ia, ib) = cKDTree(cloud.points).query(ref)
    geo = graph_distance(epsilon_graph(cloud, tau), int(ia), int(ib))
    out = {"seed": seed, "n": n, "a_index": int(ia), "b_index": int(ib),
           "geodesic": geo.distance, "connected": geo.connected}
    if with_diffusion:
        model = build_markov(adjacency_kernel(cloud, tau))
        out["diffusion"] = diffusion_distance_direct(model, config.m, int(ia), int(ib))
    return out


def histogram_modes(values, bin_width=0.02, smooth=5, max_modes=3) -> list:
    """Centres of the highest local maxima of a smoothed histogram.

    Bins have width ``bin_width``; counts are smoothed with a centred moving
    average of ``smooth`` bins before peak detection.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    lo = math.floor(values.min() / bin_width) * bin_width
    edges = np.arange(lo, values.max() + 2 * bin_width, bin_width)
    counts, edges = np.histogram(values, bins=edges)
    kernel = np.ones(smooth) / smooth
    sm = np.convolve(np.pad(counts.astype(float), smooth // 2), kernel, mode="valid")
    padded = np.concatenate([[-1.0], sm, [-1.0]])
    peaks = [i for i in range(len(sm))
             if padded[i + 1] > padded[i] and padded[i + 1] >= padded[i + 2]
             and sm[i] > 0]
    peaks.sort(key=lambda i: -sm[i])
    centres = 0.5 * (edges[:-1] + edges[1:])
    return [float(centres[i]) for i in peaks[:max_modes]]


@dataclass
class SensitivityResult:
    config: dict
    baseline: list
    noisy: list
    baseline_geodesic: float
    baseline_diffusion: float
    geodesic_change: np.ndarray
    diffusion_change: np.ndarray
    disconnected: int
    warnings: list = field(default_factory=list)

    def summary(self) -> dict:
        g, d = self.geodesic_change, self.diffusion_change
        return {
            "baseline_geodesic": self.baseline_geodesic,
            "baseline_diffusion": self.baseline_diffusion,
            "realizations": len(self.noisy),
            "disconnected": self.disconnected,
            "geodesic_change_mean": float(g.mean()) if g.size else None,
            "geodesic_change_var": float(g.var(ddof=1)) if g.size > 1 else None,
            "diffusion_change_mean": float(d.mean()) if d.size else None,
            "diffusion_change_var": float(d.var(ddof=1)) if d.size > 1 else None,
            "geodesic_modes": histogram_modes(g),
            "diffusion_modes": histogram_modes(d),
            "fraction_below_-0.5": float(np.mean(g < -0.5)) if g.size else None,
            "histogram_bin_width": 0.02,
        }


def spiral_sensitivity_experiment(config: SpiralConfig = SpiralConfig()) -> SensitivityResult:
    """Relative change of geodesic and diffusion distance under noise.

    Noiseless baselines give the reference means; each noisy realization is
    reported relative to them. Realizations where A and B are disconnected
    are counted and left out of the relative changes.
    """
    baseline = [spiral_realization(config, config.n, config.tau, 0.0,
                                   _derived_seed(config.seed, 0, r))
                for r in range(config.baseline_reps)]
    noisy = [spiral_realization(config, config.n, config.tau, config.beta,
                                _derived_seed(config.seed, 1, r))
             for r in range(config.reps)]
    warn = []
    base_ok = [r for r in baseline if r["connected"]]
    if len(base_ok) < len(baseline):
        warn.append(f"{len(baseline) - len(base_ok)} noiseless baselines disconnected")
    if not base_ok:
        raise ParameterError("every noiseless baseline is disconnected; increase tau or n")
    g0 = float(np.mean([r["geodesic"] for r in base_ok]))
    d0 = float(np.mean([r["diffusion"] for r in base_ok]))
    ok = [r for r in noisy if r["connected"]]
    disconnected = len(noisy) - len(ok)
    if disconnected:
        warn.append(f"{disconnected} noisy realizations disconnected")
    g = np.array([r["geodesic"] / g0 - 1.0 for r in ok])
    d = np.array([r["diffusion"] / d0 - 1.0 for r in ok])
    return SensitivityResult(config.to_dict(), baseline, noisy, g0, d0, g, d,
                             disconnected, warn)


@dataclass
class ConsistencyResult:
    config: dict
    realizations: dict
    warnings: list = field(default_factory=list)

    def distances(self, n) -> np.ndarray:
        return np.array([r["geodesic"] for r in self.realizations[n] if r["connected"]])

    def summary(self) -> dict:
        out = {}
        for n, runs in self.realizations.items():
            d = self.distances(n)
            mean = float(d.mean()) if d.size else None
            out[str(n)] = {
                "mean": mean,
                "median": float(np.median(d)) if d.size else None,
                "disconnected": sum(not r["connected"] for r in runs),
                "near_manifold": float(np.mean(
                    np.abs(d - MANIFOLD_DISTANCE) < np.abs(d - EUCLIDEAN_DISTANCE)))
                if d.size else None,
                "closer_to": None if mean is None else (
                    "manifold" if abs(mean - MANIFOLD_DISTANCE) < abs(mean - EUCLIDEAN_DISTANCE)
                    else "euclidean"),
            }
        return out


def spiral_consistency_experiment(config: SpiralConfig = SpiralConfig(tau=0.1)
                                  ) -> ConsistencyResult:
    """Distribution of the geodesic A-B distance for each sample size."""
    runs, warn = {}, []
    for n in config.ns:
        runs[n] = [spiral_realization(config, n, config.tau, config.beta,
                                      _derived_seed(config.seed, 2, n, r),
                                      with_diffusion=False)
                   for r in range(config.reps)]
        bad = sum(not r["connected"] for r in runs[n])
        if bad:
            warn.append(f"n={n}: {bad} realizations disconnected")
    return ConsistencyResult(config.to_dict(), runs, warn)
