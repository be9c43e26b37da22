"""Geodesic graph distance versus diffusion distance on a noisy spiral.

Run: python demos/03_spiral_distances.py   (about ten seconds)
"""
import numpy as np

from sca.geodesic import (EUCLIDEAN_DISTANCE, MANIFOLD_DISTANCE, SpiralConfig,
                          spiral_consistency_experiment, spiral_sensitivity_experiment)

print(f"along the curve A-B is {MANIFOLD_DISTANCE}, straight across {EUCLIDEAN_DISTANCE}")

# Sensitivity: perturb the points with exponential noise and compare the
# relative change of each distance against noiseless baselines.
sens = spiral_sensitivity_experiment(SpiralConfig(reps=40, baseline_reps=20))
summary = sens.summary()
print(f"noiseless geodesic {summary['baseline_geodesic']:.3f}")
print(f"geodesic change: variance {summary['geodesic_change_var']:.4f}, "
      f"modes {np.round(summary['geodesic_modes'], 2)}")
print(f"diffusion change: variance {summary['diffusion_change_var']:.4f}, "
      f"modes {np.round(summary['diffusion_modes'], 2)}")
print(f"{summary['fraction_below_-0.5']:.0%} of noisy graphs contain a shortcut")

# Consistency: with more samples the noise fills the gap between the arms
# and the graph distance collapses toward the Euclidean one.
cons = spiral_consistency_experiment(SpiralConfig(tau=0.1, ns=(600, 2000, 4000), reps=10))
for n, row in cons.summary().items():
    print(f"n={n:>5}: mean geodesic {row['mean']:.2f} (closer to {row['closer_to']})")
