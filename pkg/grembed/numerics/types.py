from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np
import scipy.sparse as sp


DenseMatrix = np.ndarray
"""
DenseMatrix is a two-dimensional, C-contiguous ``float64`` numpy array. Row-major storage and the
``rows * cols`` length invariant come from numpy itself.
"""

SparseMatrix = sp.csr_matrix
"""
SparseMatrix is a scipy compressed-row matrix. Producers call ``sort_indices()`` and
``eliminate_zeros()`` so column indices are sorted within each row and no explicit zeros remain.
"""

MatrixLike = Union[DenseMatrix, SparseMatrix]


@dataclass(frozen=True)
class AdamState:
    """
    Optimizer state for one parameter array.

    Attributes:
    -----------
    m : np.ndarray
        First-moment estimate, same shape as the parameters.
    v : np.ndarray
        Second-moment estimate, same shape as the parameters.
    t : int
        Number of steps taken so far.
    lr, beta1, beta2, eps : float
        Hyperparameters of the recurrence.
    """

    m: np.ndarray
    v: np.ndarray
    t: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros_like(cls, params: np.ndarray, lr: float = 1e-3, **hyper) -> "AdamState":
        return cls(m=np.zeros_like(params, dtype=np.float64), v=np.zeros_like(params, dtype=np.float64), lr=lr, **hyper)

    def advanced(self, m: np.ndarray, v: np.ndarray) -> "AdamState":
        return replace(self, m=m, v=v, t=self.t + 1)


@dataclass(frozen=True)
class EigenResult:
    """Eigenpairs in ascending order of eigenvalue; ``vectors[:, i]`` pairs with ``values[i]``."""

    values: np.ndarray
    vectors: DenseMatrix


@dataclass(frozen=True)
class SVDResult:
    """Leading singular triplets, singular values in descending order."""

    u: DenseMatrix
    s: np.ndarray
    v: DenseMatrix
    iterations: int = field(default=0, compare=False)
