import logging
import warnings
from typing import Optional

import numpy as np
import scipy.linalg

from grembed.embed.types import DEFAULT_DIMENSIONS, HOPE, Embedding
from grembed.errors import BetaTooLargeError, DegenerateEmbeddingError, SolverFailureError
from grembed.numerics.linalg import spectral_radius, truncated_svd
from grembed.socialgraph.types import WeightedGraph

DEFAULT_BETA_RATIO = 0.5
ZERO_ROW_TOL = 1e-8


def katz_proximity(w: np.ndarray, beta: float, block_size: int = 512) -> np.ndarray:
    """``S = sum_{k>=1} beta^k W^k = (I - beta W)^-1 beta W``, solved block of columns by block.

    Raises:
        SolverFailureError: If ``I - beta W`` is singular or the solve fails.
    """
    n = w.shape[0]
    system = np.eye(n) - beta * w
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            factors = scipy.linalg.lu_factor(system)
    except (scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning, ValueError) as e:
        raise SolverFailureError(f"Katz system could not be factorized: {e}") from e
    if np.any(np.diag(factors[0]) == 0.0):
        raise SolverFailureError("Katz system is singular")

    proximity = np.empty((n, n))
    for start in range(0, n, block_size):
        stop = min(start + block_size, n)
        proximity[:, start:stop] = scipy.linalg.lu_solve(factors, beta * w[:, start:stop])
    return proximity


def hope_embed(
    graph: WeightedGraph,
    d: int = DEFAULT_DIMENSIONS,
    beta: Optional[float] = None,
    beta_ratio: float = DEFAULT_BETA_RATIO,
    zero_row_tol: float = ZERO_ROW_TOL,
) -> Embedding:
    """High-order proximity preserving embedding over Katz proximity.

    The Katz matrix is factorized by truncated SVD and the source factors ``U * sqrt(S)`` are
    returned; on an undirected graph the target factors carry the same information.

    Args:
        graph (WeightedGraph): Weighted graph.
        d (int): Output dimension, at most ``n``.
        beta (Optional[float]): Katz decay; defaults to ``beta_ratio / rho(W)``.
        beta_ratio (float): Share of the convergence bound used when ``beta`` is not given.
        zero_row_tol (float): Rows with a smaller norm make the embedding degenerate.

    Raises:
        BetaTooLargeError: If ``beta >= 1 / rho(W)``.
        SolverFailureError: If the Katz solve fails.
        DegenerateEmbeddingError: If some row of the result is (near) zero.
    """
    if not 1 <= d <= graph.n:
        raise ValueError(f"d must lie in [1, {graph.n}], got {d}")

    w = graph.to_dense()
    rho = spectral_radius(w)
    if rho <= 0.0:
        raise DegenerateEmbeddingError("Graph has no weighted edges; Katz proximity is zero")

    # beta follows 1/rho, so a uniform rescaling of every weight leaves the proximity unchanged
    beta = beta_ratio / rho if beta is None else beta
    if beta <= 0 or beta * rho >= 1.0:
        raise BetaTooLargeError(f"beta={beta:.6g} must lie in (0, 1/rho) with rho={rho:.6g}; the Katz series diverges")

    proximity = katz_proximity(w, beta)
    svd = truncated_svd(proximity, d)
    logging.info("HOPE: beta=%.6g, rho=%.6g, leading singular values %s", beta, rho, np.round(svd.s[:3], 6))

    vectors = svd.u * np.sqrt(svd.s)
    return Embedding(method=HOPE, vectors=vectors, users=list(graph.users)).validate(zero_row_tol)
