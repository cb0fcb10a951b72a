import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from grembed.embed.types import DEFAULT_DIMENSIONS, SPECTRAL, Embedding
from grembed.errors import DisconnectedGraphError
from grembed.numerics.linalg import symmetric_eigs_smallest
from grembed.socialgraph.types import WeightedGraph

# Heat-kernel time used by the pipeline; the bare function defaults to plain eigenvectors.
DEFAULT_DIFFUSION_TIME = 10.0


def normalized_laplacian(graph: WeightedGraph) -> sp.csr_matrix:
    """``I - Deg^-1/2 W Deg^-1/2`` as an exactly symmetric CSR matrix."""
    w = graph.to_sparse()
    degree = np.asarray(w.sum(axis=1)).ravel()
    inv_sqrt = np.zeros_like(degree)
    inv_sqrt[degree > 0] = 1.0 / np.sqrt(degree[degree > 0])
    scale = sp.diags(inv_sqrt)
    laplacian = sp.identity(graph.n, format="csr") - scale @ w @ scale
    laplacian = 0.5 * (laplacian + laplacian.T)
    laplacian = sp.csr_matrix(laplacian)
    laplacian.eliminate_zeros()
    laplacian.sort_indices()
    return laplacian


def spectral_embed(
    graph: WeightedGraph,
    d: int = DEFAULT_DIMENSIONS,
    strict: bool = False,
    seed: int = 0,
    diffusion_time: float = 0.0,
) -> Embedding:
    """Laplacian-eigenmap embedding.

    Dimension ``i`` is the eigenvector of the ``i + 2``-th smallest eigenvalue of the symmetric
    normalized Laplacian; the trivial first eigenvector is skipped.

    With ``diffusion_time = t > 0`` every column is scaled by the heat-kernel factor
    ``exp(-t * eigenvalue)``. Columns of near-zero eigenvalues, the ones that separate weakly
    linked communities, keep their weight while the bulk of the spectrum fades, so k-means on
    the rows sees the communities instead of within-community noise. ``t = 0`` returns the plain
    unit-norm eigenvectors.

    Raises:
        ValueError: If ``d >= n`` or ``diffusion_time < 0``.
        DisconnectedGraphError: If ``strict`` and the graph has more than one component.
    """
    if not 1 <= d < graph.n:
        raise ValueError(f"d must lie in [1, {graph.n - 1}] for a graph of {graph.n} nodes, got {d}")
    if diffusion_time < 0:
        raise ValueError(f"diffusion_time must be >= 0, got {diffusion_time}")

    components, _ = connected_components(graph.to_sparse(), directed=False)
    if components > 1:
        if strict:
            raise DisconnectedGraphError(f"Graph has {components} connected components")
        logging.warning("Spectral embedding of a graph with %d components; the first dimensions index them", components)

    eig = symmetric_eigs_smallest(normalized_laplacian(graph), d + 1, seed=seed)
    logging.info("Spectral embedding: eigenvalues %.4g .. %.4g kept", eig.values[1], eig.values[-1])
    vectors = eig.vectors[:, 1:]
    if diffusion_time > 0:
        vectors = vectors * heat_kernel_weights(eig.values[1:], diffusion_time)
    return Embedding(method=SPECTRAL, vectors=vectors, users=list(graph.users)).validate(zero_row_tol=None)


def heat_kernel_weights(eigenvalues: np.ndarray, diffusion_time: float) -> np.ndarray:
    """``exp(-t * lambda)`` per eigenvalue; round-off negatives count as zero."""
    return np.exp(-diffusion_time * np.maximum(np.asarray(eigenvalues, dtype=np.float64), 0.0))
