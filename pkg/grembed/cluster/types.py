from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np


@dataclass(frozen=True, eq=False)
class Clustering:
    """
    Result of one k-means run over embedding rows.

    Attributes:
    -----------
    k : int
        Number of clusters.
    centroids : np.ndarray
        ``k x D`` centroid matrix.
    assignment : np.ndarray
        Cluster id of every row, nearest centroid with ties going to the lowest id.
    inertia : float
        Sum of squared distances of the rows to their assigned centroid.
    trace : List[float]
        Inertia after every assignment step; non-increasing.
    """

    k: int
    centroids: np.ndarray
    assignment: np.ndarray
    inertia: float
    trace: List[float] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def sizes(self) -> List[int]:
        return np.bincount(self.assignment, minlength=self.k).tolist()

    def display(self) -> str:
        return f"Clustering(k={self.k}, sizes={self.sizes()}, inertia={self.inertia:.6g}, iterations={self.iterations})"


@dataclass(frozen=True)
class ElbowScan:
    """
    Inertia curve of an elbow scan and the k it selected.

    Attributes:
    -----------
    k : int
        Selected cluster count.
    inertias : Dict[int, float]
        Best inertia for every scanned k, including the two bracketing values.
    """

    k: int
    inertias: Dict[int, float]

    def second_differences(self) -> Dict[int, float]:
        """``inertia(k-1) - 2 inertia(k) + inertia(k+1)`` for every interior k."""
        ks = sorted(self.inertias)
        return {
            k: self.inertias[k - 1] - 2.0 * self.inertias[k] + self.inertias[k + 1]
            for k in ks
            if k - 1 in self.inertias and k + 1 in self.inertias
        }
