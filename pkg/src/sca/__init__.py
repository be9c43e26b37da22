"""Diffusion maps on point clouds: kernels, Markov chains, spectral embeddings,
bandwidth selection and quadrature reference solutions."""
__version__ = "0.1.0"

from .errors import (DisconnectedGraphError, IllConditionedExtensionError, IsolatedVertexError,
                     NumericalError, ParameterError, ParseError, ScaError)
from .pointcloud import GeneratorSpec, PointCloud, generate, read_points_csv, write_points_csv
from .kernelgraph import build_kernel, adjacency_kernel, epsilon_graph
from .markov import MarkovModel, build_markov, m_step
from .eigen import SpectralDecomposition, decompose
from .diffusion import (apply_A_t, diffusion_distance_direct, diffusion_distance_spectral,
                        embed)
from .nystrom import extend, extend_embedding

__all__ = [
    "__version__", "ScaError", "ParseError", "ParameterError", "NumericalError",
    "IllConditionedExtensionError", "DisconnectedGraphError", "IsolatedVertexError",
    "PointCloud", "GeneratorSpec", "generate", "read_points_csv", "write_points_csv",
    "build_kernel", "adjacency_kernel", "epsilon_graph", "MarkovModel", "build_markov",
    "m_step", "SpectralDecomposition", "decompose", "embed", "diffusion_distance_spectral",
    "diffusion_distance_direct", "apply_A_t", "extend", "extend_embedding",
]
