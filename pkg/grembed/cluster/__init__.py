from .kmeans import (
    DEFAULT_K_MAX,
    DEFAULT_K_MIN,
    DEFAULT_MAX_ITER,
    DEFAULT_N_INIT,
    elbow_scan,
    elbow_select_k,
    kmeans,
    kmeans_plus_plus,
    predict_cluster,
    squared_distances,
)
from .storage import load_clustering, save_clustering, save_elbow_curve
from .types import Clustering, ElbowScan


__all__ = [
    "DEFAULT_K_MAX",
    "DEFAULT_K_MIN",
    "DEFAULT_MAX_ITER",
    "DEFAULT_N_INIT",
    "Clustering",
    "ElbowScan",
    "elbow_scan",
    "elbow_select_k",
    "kmeans",
    "kmeans_plus_plus",
    "load_clustering",
    "predict_cluster",
    "save_clustering",
    "save_elbow_curve",
    "squared_distances",
]
