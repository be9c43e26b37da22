"""How a walk started in one cluster spreads over a three-cluster density.

Run: python demos/04_heat_flow.py   (a few seconds)
"""
import numpy as np
from scipy.signal import find_peaks

from sca.oracle import THREE_GAUSSIANS, evolve_density, quadrature_operator, total_variation

# Discretize the averaging operator of the density on a fine grid.
model = quadrature_operator(THREE_GAUSSIANS, 1e-3, 2048)
start = int(np.argmin(np.abs(model.grid)))  # walk starts at x = 0

# Count the modes of the transition density as time grows.
for t in (0.01, 0.1, 1, 10, 100, 1000):
    dens = evolve_density(model, t, start)
    peaks, _ = find_peaks(dens, prominence=1e-2 * dens.max())
    print(f"t={t:<6} modes at {np.round(model.grid[peaks], 2)}")

# Long-run limit: the normalized square of the density.
p2 = THREE_GAUSSIANS.pdf(model.grid) ** 2
late = evolve_density(model, 1e4, start) * model.spacing
print("TV distance to p^2 / int p^2:", f"{total_variation(late, p2 / p2.sum()):.1e}")
