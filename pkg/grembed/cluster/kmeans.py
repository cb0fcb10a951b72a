import logging
from typing import Optional

import numpy as np

from grembed.cluster.types import Clustering, ElbowScan
from grembed.errors import KTooLargeError
from grembed.numerics.rng import child_rng

DEFAULT_MAX_ITER = 300
DEFAULT_N_INIT = 4
DEFAULT_K_MIN = 2
DEFAULT_K_MAX = 10


def squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """``n x k`` matrix of squared Euclidean distances, exact zero for identical vectors."""
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def distinct_count(points: np.ndarray) -> int:
    return int(np.unique(points, axis=0).shape[0])


def kmeans_plus_plus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: the first center uniformly, the rest with probability proportional to D^2."""
    n = points.shape[0]
    centers = [int(rng.integers(n))]
    closest = squared_distances(points, points[centers])[:, 0]
    for _ in range(1, k):
        cumulative = np.cumsum(closest)
        pick = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
        pick = min(pick, n - 1)
        centers.append(pick)
        closest = np.minimum(closest, squared_distances(points, points[[pick]])[:, 0])
    return points[centers].copy()


def _update_centroids(points: np.ndarray, labels: np.ndarray, centroids: np.ndarray, dist: np.ndarray) -> np.ndarray:
    k = centroids.shape[0]
    sums = np.zeros_like(centroids)
    np.add.at(sums, labels, points)
    counts = np.bincount(labels, minlength=k)

    updated = centroids.copy()
    filled = counts > 0
    updated[filled] = sums[filled] / counts[filled, None]

    # Empty clusters take over the point farthest from its own centroid.
    own = dist[np.arange(points.shape[0]), labels].copy()
    for c in np.flatnonzero(~filled):
        far = int(np.argmax(own))
        updated[c] = points[far]
        own[far] = -1.0
    return updated


def _lloyd(points: np.ndarray, centroids: np.ndarray, max_iter: int) -> Clustering:
    labels: Optional[np.ndarray] = None
    trace = []
    for _ in range(max_iter):
        dist = squared_distances(points, centroids)
        new_labels = np.argmin(dist, axis=1)
        trace.append(float(dist[np.arange(points.shape[0]), new_labels].sum()))
        if labels is not None and np.array_equal(labels, new_labels):
            break
        labels = new_labels
        centroids = _update_centroids(points, labels, centroids, dist)
    else:
        dist = squared_distances(points, centroids)
        labels = np.argmin(dist, axis=1)
        trace.append(float(dist[np.arange(points.shape[0]), labels].sum()))

    return Clustering(
        k=centroids.shape[0], centroids=centroids, assignment=labels.astype(np.int64), inertia=trace[-1], trace=trace
    )


def kmeans(
    points: np.ndarray, k: int, max_iter: int = DEFAULT_MAX_ITER, seed: int = 0, n_init: int = DEFAULT_N_INIT
) -> Clustering:
    """Lloyd's k-means with k-means++ seeding.

    Each of the ``n_init`` runs draws from its own ``(seed, run)`` stream; the lowest-inertia run
    wins, the earliest on ties.

    Args:
        points (np.ndarray): ``n x D`` rows to cluster.
        k (int): Number of clusters, at most the number of distinct rows.
        max_iter (int): Cap on Lloyd iterations per run.
        seed (int): Stage seed.
        n_init (int): Number of seeded restarts.

    Returns:
        Clustering: The best run.

    Raises:
        KTooLargeError: If ``k`` exceeds the number of distinct rows.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError(f"points must be a non-empty 2-D array, got shape {points.shape}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if max_iter < 1 or n_init < 1:
        raise ValueError(f"max_iter and n_init must be at least 1, got {max_iter} and {n_init}")
    distinct = distinct_count(points)
    if k > distinct:
        raise KTooLargeError(f"Cannot form {k} clusters from {distinct} distinct points")

    best: Optional[Clustering] = None
    for run in range(n_init):
        result = _lloyd(points, kmeans_plus_plus(points, k, child_rng(seed, run)), max_iter)
        if best is None or result.inertia < best.inertia:
            best = result
    logging.debug("k-means k=%d: inertia %.6g after %d iterations", k, best.inertia, best.iterations)
    return best


def elbow_scan(
    points: np.ndarray,
    k_min: int = DEFAULT_K_MIN,
    k_max: int = DEFAULT_K_MAX,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    n_init: int = DEFAULT_N_INIT,
) -> ElbowScan:
    """Runs k-means for ``k_min - 1 .. k_max + 1`` and picks the k of maximal inertia second difference.

    Only interior k in ``[k_min, k_max]`` are candidates; ties go to the smaller k. The scan is
    capped at the number of distinct rows.

    Raises:
        KTooLargeError: If fewer than ``k_min + 1`` distinct rows exist.
    """
    if k_min < 2 or k_max <= k_min:
        raise ValueError(f"Need 2 <= k_min < k_max, got k_min={k_min}, k_max={k_max}")

    points = np.asarray(points, dtype=np.float64)
    top = min(k_max + 1, distinct_count(points))
    if top < k_min + 1:
        raise KTooLargeError(f"Elbow scan from k={k_min} needs {k_min + 1} distinct points, found {top}")

    inertias = {k: kmeans(points, k, max_iter, seed, n_init).inertia for k in range(k_min - 1, top + 1)}
    scan = ElbowScan(k=k_min, inertias=inertias)
    scores = scan.second_differences()
    best_k = max((k for k in scores if k_min <= k <= k_max), key=lambda k: (scores[k], -k))
    logging.info("Elbow scan over k=%d..%d selected k=%d", k_min - 1, top, best_k)
    return ElbowScan(k=best_k, inertias=inertias)


def elbow_select_k(
    points: np.ndarray,
    k_min: int = DEFAULT_K_MIN,
    k_max: int = DEFAULT_K_MAX,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    n_init: int = DEFAULT_N_INIT,
) -> int:
    return elbow_scan(points, k_min, k_max, seed, max_iter, n_init).k


def predict_cluster(clustering: Clustering, point: np.ndarray) -> int:
    """Id of the nearest centroid; ties go to the lowest id."""
    point = np.asarray(point, dtype=np.float64)
    if point.shape != (clustering.centroids.shape[1],):
        raise ValueError(f"Point has shape {point.shape}, centroids have dimension {clustering.centroids.shape[1]}")
    return int(np.argmin(squared_distances(point[None, :], clustering.centroids)[0]))
