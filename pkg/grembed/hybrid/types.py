from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from grembed.ingest.types import BusinessId, UserId

DEFAULT_HIDDEN = (32, 64, 128)


@dataclass(frozen=True, eq=False)
class HybridDataset:
    """
    Supervised indicator dataset built from the per-embedding recommenders.

    Attributes:
    -----------
    users : List[UserId]
        Cohort users, one sample each.
    restaurants : List[BusinessId]
        Restaurant universe, sorted by id; shared by the last axis of ``x`` and ``y``.
    methods : Tuple[str, ...]
        Embedding order of axis 1 of ``x``.
    x : np.ndarray
        ``n x 3 x R`` tensor; ``x[i, e, r]`` marks that embedding ``e`` recommended ``r`` to user ``i``.
    y : np.ndarray
        ``n x R`` matrix; ``y[i, r] = 1`` iff ``r`` is in user ``i``'s ground truth.
    support : np.ndarray
        ``n x R`` neighbor votes for ``r`` summed over the embeddings; zeros when not given.
    rated : np.ndarray
        ``n x R`` boolean mask of restaurants user ``i`` already rated in the visible data.
    """

    users: List[UserId]
    restaurants: List[BusinessId]
    methods: Tuple[str, ...]
    x: np.ndarray
    y: np.ndarray
    support: Optional[np.ndarray] = None
    rated: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        n, r = len(self.users), len(self.restaurants)
        if self.x.shape != (n, len(self.methods), r) or self.y.shape != (n, r):
            raise ValueError(
                f"Inconsistent shapes: x {self.x.shape}, y {self.y.shape} for {n} users and {r} restaurants"
            )
        if self.support is None:
            object.__setattr__(self, "support", np.zeros((n, r)))
        if self.rated is None:
            object.__setattr__(self, "rated", np.zeros((n, r), dtype=bool))
        if self.support.shape != (n, r) or self.rated.shape != (n, r):
            raise ValueError(f"support {self.support.shape} and rated {self.rated.shape} must both be {(n, r)}")

    @property
    def n(self) -> int:
        return len(self.users)

    @property
    def r(self) -> int:
        return len(self.restaurants)

    def subset(self, rows: np.ndarray) -> "HybridDataset":
        return HybridDataset(
            users=[self.users[i] for i in rows],
            restaurants=self.restaurants,
            methods=self.methods,
            x=self.x[rows],
            y=self.y[rows],
            support=self.support[rows],
            rated=self.rated[rows],
        )

    def display(self) -> str:
        return f"HybridDataset(x={self.x.shape}, y={self.y.shape}, positives={int(self.y.sum())})"


@dataclass(eq=False)
class MLPModel:
    """
    Fully connected network with a rectifier after every layer, the output layer included.

    Attributes:
    -----------
    weights : List[np.ndarray]
        ``fan_in x fan_out`` matrices, input layer first.
    biases : List[np.ndarray]
        One vector per layer, aligned with ``weights``.
    """

    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValueError("An MLP needs one bias vector per weight matrix and at least one layer")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if b.shape != (w.shape[1],):
                raise ValueError(f"Layer {i}: bias shape {b.shape} does not match weights {w.shape}")
            if i and self.weights[i - 1].shape[1] != w.shape[0]:
                raise ValueError(f"Layer {i}: input size {w.shape[0]} does not chain to {self.weights[i - 1].shape[1]}")

    @property
    def layer_sizes(self) -> List[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    def parameters(self) -> List[np.ndarray]:
        """Weights and biases interleaved layer by layer."""
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    @classmethod
    def from_parameters(cls, params: List[np.ndarray]) -> "MLPModel":
        return cls(weights=list(params[0::2]), biases=list(params[1::2]))

    def copy(self) -> "MLPModel":
        return MLPModel.from_parameters([p.copy() for p in self.parameters()])

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())

    def display(self) -> str:
        return "MLP(" + " -> ".join(str(s) for s in self.layer_sizes) + ", ReLU on every layer)"


@dataclass
class TrainingResult:
    """
    Outcome of :func:`grembed.hybrid.mlp.train_mlp`.

    Attributes:
    -----------
    model : MLPModel
        Parameters after the final epoch.
    train_losses, validation_losses : List[float]
        MSE per epoch, measured before that epoch's update; validation is empty without test users.
    train_users, test_users : List[UserId]
        The seeded split of the cohort.
    """

    model: MLPModel
    train_losses: List[float] = field(default_factory=list)
    validation_losses: List[float] = field(default_factory=list)
    train_users: List[UserId] = field(default_factory=list)
    test_users: List[UserId] = field(default_factory=list)
