"""Quantize diffusion coordinates with k-means and build the coarse chain.

Run: python demos/05_coarse_graining.py
"""
import warnings

import numpy as np

from sca.coarsegrain import coarse_chain, kmeans_diffusion, spectral_fidelity
from sca.diffusion import embed
from sca.eigen import decompose
from sca.kernelgraph import build_kernel
from sca.markov import build_markov
from sca.pointcloud import GeneratorSpec, PointCloud, generate, mutual_information_features

# Three blobs in the plane.
spec = GeneratorSpec("gaussian_mixture",
                     {"means": [[0, 0], [3, 0], [0, 3]], "sds": [0.4, 0.4, 0.4]}, 2)
cloud = generate(spec, 600)
model = build_markov(build_kernel(cloud, 0.1))
with warnings.catch_warnings():
    warnings.simplefilter("ignore", RuntimeWarning)
    dec = decompose(model, 4)

quant = kmeans_diffusion(embed(dec, 2, 4), 3, seed=0)
print("cluster sizes", np.bincount(quant.assignment))
print("distortion history", np.round(quant.history, 5))

chain = coarse_chain(model, quant, m=2)
print("coarse 2-step chain\n", chain.transition.round(4))
print("masses", chain.masses.round(3))
print("relative eigenvalue gaps", spectral_fidelity(model, chain, 2).round(4))

# Words as points: pointwise mutual information against documents.
counts = np.array([[4, 3, 0, 0], [5, 2, 1, 0], [0, 0, 6, 4], [0, 1, 3, 5]])
info, floored = mutual_information_features(counts)
words = PointCloud(info.T)
print("word features", words.points.shape, "zero cells floored:", int(floored.sum()))
