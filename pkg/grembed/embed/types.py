import csv
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from grembed.errors import DegenerateEmbeddingError, MalformedLineError
from grembed.ingest.types import UserId
from grembed.utils import ensure_parent, format_real

NODE2VEC = "node2vec"
SPECTRAL = "spectral"
HOPE = "hope"
METHODS = (HOPE, SPECTRAL, NODE2VEC)

DEFAULT_DIMENSIONS = 25


OnEpochEndCallable = Callable[
    [
        int,  # Zero-based epoch index that just finished.
        float,  # Mean training loss over the epoch.
    ],
    None,  # The callable does not return any value (returns None).
]
"""
OnEpochEndCallable is invoked once per finished SGNS epoch with the epoch index and its mean
pair loss. It lets callers trace convergence without the trainer knowing about logging or files.
"""


@dataclass(frozen=True, eq=False)
class Embedding:
    """
    Node vectors produced by one embedding method.

    Attributes:
    -----------
    method : str
        One of ``node2vec``, ``spectral``, ``hope``.
    vectors : np.ndarray
        ``n x dim`` matrix; row ``i`` belongs to ``users[i]``.
    users : List[UserId]
        Row order, identical to the graph's node order.
    """

    method: str
    vectors: np.ndarray
    users: List[UserId]
    index_of: Dict[UserId, int] = field(init=False)

    def __post_init__(self) -> None:
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.users):
            raise ValueError(f"Expected {len(self.users)} rows of vectors, got shape {self.vectors.shape}")
        object.__setattr__(self, "index_of", {u: i for i, u in enumerate(self.users)})

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __contains__(self, user: object) -> bool:
        return user in self.index_of

    def vector_of(self, user: UserId) -> np.ndarray:
        return self.vectors[self.index_of[user]]

    def validate(self, zero_row_tol: Optional[float] = 0.0) -> "Embedding":
        """Checks that every entry is finite and no row has norm ``<= zero_row_tol`` (or is exactly zero).

        ``zero_row_tol=None`` skips the row check, for methods where a zero row is a legitimate
        coordinate (eigenvectors restricted to one component).

        Raises:
            DegenerateEmbeddingError: Naming the first offending user.
        """
        if not np.all(np.isfinite(self.vectors)):
            bad = int(np.flatnonzero(~np.all(np.isfinite(self.vectors), axis=1))[0])
            raise DegenerateEmbeddingError(f"{self.method} embedding has non-finite entries for '{self.users[bad]}'")

        if zero_row_tol is None:
            return self

        norms = np.linalg.norm(self.vectors, axis=1)
        degenerate = (norms <= zero_row_tol) | ~np.any(self.vectors != 0.0, axis=1)
        if np.any(degenerate):
            bad = int(np.flatnonzero(degenerate)[0])
            raise DegenerateEmbeddingError(
                f"{self.method} embedding row for '{self.users[bad]}' is (near) zero "
                f"({int(degenerate.sum())} such rows)"
            )
        return self


@dataclass(frozen=True)
class WalkCorpus:
    """
    Second-order random walks over a graph, stored node-major (all walks of node 0 first).

    Attributes:
    -----------
    walks : List[np.ndarray]
        Node-index sequences; each starts at its source node.
    n_nodes : int
        Number of graph nodes the indices refer to.
    walk_length, walks_per_node : int
        Generation parameters; a walk is shorter than ``walk_length`` only at a dead end.
    p, q : float
        Return and in-out parameters.
    """

    walks: List[np.ndarray]
    n_nodes: int
    walk_length: int
    walks_per_node: int
    p: float
    q: float

    def __len__(self) -> int:
        return len(self.walks)

    @property
    def tokens(self) -> int:
        return sum(len(w) for w in self.walks)


@dataclass(frozen=True)
class Node2VecParams:
    """Walk and skip-gram hyperparameters; defaults follow the reference node2vec setup."""

    p: float = 1.0
    q: float = 1.0
    walks_per_node: int = 10
    walk_length: int = 80
    window: int = 10
    negatives: int = 5
    epochs: int = 5
    lr: float = 0.025


def save_embedding(path: str, embedding: Embedding) -> None:
    """Writes ``user_id,dim0..dim{D-1}`` then one row per node with 17 significant digits."""
    ensure_parent(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id"] + [f"dim{i}" for i in range(embedding.dim)])
        for user, row in zip(embedding.users, embedding.vectors):
            writer.writerow([user] + [format_real(x) for x in row])


def load_embedding(path: str, method: Optional[str] = None) -> Embedding:
    """Reads an embedding written by :func:`save_embedding`; values round-trip exactly."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "user_id":
            raise MalformedLineError(path, 1, "expected a 'user_id,dim0,...' header")
        dim = len(header) - 1
        users, rows = [], []
        for line_number, record in enumerate(reader, 2):
            if len(record) != dim + 1:
                raise MalformedLineError(path, line_number, f"expected {dim} values after the user id")
            users.append(record[0])
            rows.append([float(x) for x in record[1:]])

    vectors = np.array(rows, dtype=np.float64).reshape(len(rows), dim)
    return Embedding(method=method or "unknown", vectors=vectors, users=users)
