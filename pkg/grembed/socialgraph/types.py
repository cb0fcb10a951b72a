from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Tuple

import numpy as np
import scipy.sparse as sp

from grembed.ingest.types import UserId


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """
    Undirected user graph with similarity weights in [0, 1].

    Attributes:
    -----------
    users : List[UserId]
        Node ids in index order (sorted ascending).
    index_of : Dict[UserId, int]
        Dense index of every node.
    neighbors : List[np.ndarray]
        Per-node neighbor indices, sorted ascending.
    weights : List[np.ndarray]
        Per-node edge weights aligned with ``neighbors``.
    """

    users: List[UserId]
    neighbors: List[np.ndarray]
    weights: List[np.ndarray]
    index_of: Dict[UserId, int] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index_of", {u: i for i, u in enumerate(self.users)})

    @classmethod
    def from_edges(cls, users: Iterable[UserId], edges: Iterable[Tuple[UserId, UserId, float]]) -> "WeightedGraph":
        """Builds a graph from undirected ``(a, b, weight)`` triples; node order is the sorted ``users``."""
        ordered = sorted(set(users))
        index = {u: i for i, u in enumerate(ordered)}
        rows: List[List[Tuple[int, float]]] = [[] for _ in ordered]
        for a, b, w in edges:
            i, j = index[a], index[b]
            rows[i].append((j, float(w)))
            rows[j].append((i, float(w)))

        neighbors, weights = [], []
        for row in rows:
            row.sort()
            neighbors.append(np.array([j for j, _ in row], dtype=np.int64))
            weights.append(np.array([w for _, w in row], dtype=np.float64))
        return cls(users=ordered, neighbors=neighbors, weights=weights)

    @property
    def n(self) -> int:
        return len(self.users)

    def adjacency(self, i: int) -> List[Tuple[int, float]]:
        """Sorted ``(neighbor index, weight)`` pairs of node ``i``."""
        return list(zip(self.neighbors[i].tolist(), self.weights[i].tolist()))

    def weighted_degree(self, i: int) -> float:
        return float(np.sum(self.weights[i]))

    def edges(self) -> Iterator[Tuple[int, int, float]]:
        """Every undirected edge once, as ``(i, j, weight)`` with ``i < j``, in index order."""
        for i in range(self.n):
            for j, w in zip(self.neighbors[i], self.weights[i]):
                if i < j:
                    yield i, int(j), float(w)

    def to_sparse(self) -> sp.csr_matrix:
        """Symmetric CSR adjacency matrix with sorted indices and no explicit zeros."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(nb) for nb in self.neighbors])
        indices = np.concatenate(self.neighbors) if self.n else np.zeros(0, dtype=np.int64)
        data = np.concatenate(self.weights) if self.n else np.zeros(0)
        matrix = sp.csr_matrix((data, indices, indptr), shape=(self.n, self.n))
        matrix.eliminate_zeros()
        matrix.sort_indices()
        return matrix

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def validate(self) -> None:
        """Checks symmetry, absence of self-loops, weight bounds and neighbor ordering.

        Raises:
            ValueError: On the first violated invariant.
        """
        lookup = [dict(zip(nb.tolist(), w.tolist())) for nb, w in zip(self.neighbors, self.weights)]
        for i in range(self.n):
            nb, w = self.neighbors[i], self.weights[i]
            if np.any(np.diff(nb) <= 0):
                raise ValueError(f"Neighbor list of node {i} is not strictly sorted")
            if np.any(nb == i):
                raise ValueError(f"Node {i} has a self-loop")
            if np.any((w < 0.0) | (w > 1.0)):
                raise ValueError(f"Node {i} has a weight outside [0, 1]")
            for j, weight in lookup[i].items():
                if lookup[j].get(i) != weight:
                    raise ValueError(f"Edge ({i}, {j}) is not symmetric")


@dataclass(frozen=True)
class GraphStats:
    """Node count, edge count (unordered pairs) and average degree ``2 * edges / nodes``."""

    nodes: int
    edges: int
    avg_degree: float

    def display(self) -> str:
        return f"{self.nodes} nodes, {self.edges} edges, average degree {self.avg_degree:.4f}"
