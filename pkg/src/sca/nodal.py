"""Nodal domains (sign patterns) of eigenvectors and their stability."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import SpectralDecomposition
from .errors import ParameterError

__all__ = [
    "NodalMap",
    "nodal_map",
    "nodal_error",
    "noise_exponent_curve",
    "fit_noise_exponent",
]


@dataclass(frozen=True)
class NodalMap:
    """Per-point signs in {-1, 0, +1} of eigenvector ``ell``."""

    signs: np.ndarray
    ell: int
    epsilon: float | None = None

    def __post_init__(self):
        s = np.asarray(self.signs)
        if s.ndim != 1 or np.any(np.abs(s) > 1) or np.any(s != np.round(s)):
            raise ParameterError("signs must be a vector of -1, 0, +1")
        s = s.astype(np.int8)
        s.setflags(write=False)
        object.__setattr__(self, "signs", s)


def nodal_map(dec: SpectralDecomposition, ell: int) -> NodalMap:
    if not 0 <= ell <= dec.q:
        raise ParameterError(f"ell must lie in 0..{dec.q}")
    return NodalMap(np.sign(dec.psi[:, ell]), ell, dec.epsilon)


def _signs(x):
    return x.signs if isinstance(x, NodalMap) else np.asarray(x)


def nodal_error(estimate, reference, weights=None) -> float:
    """Disagreement rate after the better of the two global sign choices.

    A zero entry disagrees with any nonzero sign. ``weights`` (summing to
    one) replace the uniform average over points.
    """
    a, b = _signs(estimate), _signs(reference)
    if a.shape != b.shape:
        raise ParameterError(f"length mismatch: {a.shape} vs {b.shape}")
    if weights is None:
        w = np.full(a.shape[0], 1.0 / a.shape[0])
    else:
        w = np.asarray(weights, dtype=float)
        w = w / w.sum()
    same = float(w @ (a != b))
    flipped = float(w @ (-a != b))
    return min(same, flipped)


def noise_exponent_curve(psi, weights, deltas) -> np.ndarray:
    """Mass of ``{0 < |psi| <= delta}`` for each ``delta``.

    ``psi`` holds eigenfunction values on a grid and ``weights`` the
    probability mass of each grid cell.
    """
    psi = np.abs(np.asarray(psi, dtype=float))
    w = np.asarray(weights, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    nonzero = psi > 0
    order = np.argsort(psi[nonzero])
    sorted_psi = psi[nonzero][order]
    cum = np.concatenate([[0.0], np.cumsum(w[nonzero][order])])
    return cum[np.searchsorted(sorted_psi, deltas, side="right")]


def fit_noise_exponent(deltas, curve, fit_range) -> float:
    """Log-log slope of the noise-exponent curve over ``fit_range = (lo, hi)``.

    Diagnostic only; the slope estimates ``alpha`` in ``P(|psi| <= d) ~ d^alpha``.
    """
    deltas = np.asarray(deltas, dtype=float)
    curve = np.asarray(curve, dtype=float)
    lo, hi = fit_range
    sel = (deltas >= lo) & (deltas <= hi) & (curve > 0)
    if sel.sum() < 2:
        raise ParameterError("fit range holds fewer than two positive points")
    slope, _ = np.polyfit(np.log(deltas[sel]), np.log(curve[sel]), 1)
    return float(slope)
