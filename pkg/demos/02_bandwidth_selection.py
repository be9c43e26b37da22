"""Three ways to pick the kernel bandwidth on the same sample.

Run: python demos/02_bandwidth_selection.py   (about a minute)
"""
import warnings

from sca.bandwidth import bootstrap_snr, mst_rule, neighborhood_rule
from sca.kernelgraph import neighbor_counts
from sca.pointcloud import GeneratorSpec, generate

cloud = generate(GeneratorSpec("gaussian_mixture",
                               {"means": [-2, 2], "sds": [1, 1], "weights": [0.5, 0.5]}, 1),
                 1000)

# 1. Neighborhood size: grow eps until the median point sees ~100 neighbours
#    within sqrt(2 eps).
grid = [0.01, 0.02, 0.03, 0.05, 0.075, 0.1, 0.2]
for eps in grid:
    print(f"eps={eps:<6} median neighbours {neighbor_counts(cloud, eps)[1]:.0f}")
print("neighbourhood rule picks", neighborhood_rule(cloud, grid, 100))

# 2. MST: the longest edge of the Euclidean minimum spanning tree is the
#    smallest scale at which the graph is connected.
res = mst_rule(cloud)
print(f"MST longest edge {res.longest_edge:.3f} -> eps {res.epsilon:.3f}")

# 3. Bootstrap SNR of psi_1: refit on resamples, extend each fit back to the
#    original points, and compare the squared mean to the spread.
#    B is kept small here so the demo is quick.
with warnings.catch_warnings():
    warnings.simplefilter("ignore", RuntimeWarning)
    curve = bootstrap_snr(cloud, 1, [0.005, 0.01, 0.02, 0.05, 0.1, 0.3], B=10,
                          threshold=5, seed=0)
for eps, snr in zip(curve.epsilons, curve.snr):
    print(f"eps={eps:<6} SNR {snr:6.2f}")
print("SNR rule (threshold 5) picks", curve.selected)
