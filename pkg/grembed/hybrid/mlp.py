import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from grembed.embed.types import OnEpochEndCallable
from grembed.errors import DivergenceError
from grembed.hybrid.types import DEFAULT_HIDDEN, HybridDataset, MLPModel, TrainingResult
from grembed.ingest.types import BusinessId
from grembed.numerics.optim import adam_step
from grembed.numerics.rng import seeded_rng
from grembed.numerics.types import AdamState

DEFAULT_SPLIT_RATIO = 0.8
DEFAULT_EPOCHS = 40
DEFAULT_LR = 1e-4

# Ranking keys of the fused recommender: pooled votes then network score, or the network alone.
FUSION_SUPPORT = "support"
FUSION_NETWORK = "network"
FUSIONS = (FUSION_SUPPORT, FUSION_NETWORK)


def init_mlp(layer_sizes: Sequence[int], rng: np.random.Generator) -> MLPModel:
    """Zero biases and weights uniform in ``+-sqrt(6 / (fan_in + fan_out))``."""
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MLPModel(weights=weights, biases=biases)


def _flatten(x: np.ndarray) -> np.ndarray:
    return x.reshape(x.shape[0], -1)


def _forward(model: MLPModel, inputs: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    activations, pre = [inputs], []
    for w, b in zip(model.weights, model.biases):
        z = activations[-1] @ w + b
        pre.append(z)
        activations.append(np.maximum(z, 0.0))
    return activations, pre


def mlp_forward(model: MLPModel, x: np.ndarray) -> np.ndarray:
    """Scores for one ``3 x R`` sample (or a batch of them), flattened row-major."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 2
    batch = _flatten(x[None] if single else x)
    if batch.shape[1] != model.layer_sizes[0]:
        raise ValueError(f"Input flattens to {batch.shape[1]} values, model expects {model.layer_sizes[0]}")
    out = _forward(model, batch)[0][-1]
    return out[0] if single else out


def loss_and_grads(model: MLPModel, x: np.ndarray, y: np.ndarray) -> Tuple[float, List[np.ndarray]]:
    """Mean squared error over users and restaurants, with gradients in :meth:`MLPModel.parameters` order."""
    activations, pre = _forward(model, _flatten(x))
    residual = activations[-1] - y
    loss = float(np.mean(residual**2))

    grads: List[np.ndarray] = []
    upstream = 2.0 * residual / residual.size
    for layer in reversed(range(len(model.weights))):
        delta = upstream * (pre[layer] > 0.0)
        grads.append(delta.sum(axis=0))
        grads.append(activations[layer].T @ delta)
        upstream = delta @ model.weights[layer].T
    grads.reverse()
    return loss, grads


def mse(model: MLPModel, dataset: HybridDataset) -> float:
    return float(np.mean((mlp_forward(model, dataset.x) - dataset.y) ** 2))


def split_users(n: int, split_ratio: float, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle then ``split_ratio`` of the rows for training; at least one training row."""
    if not 0.0 < split_ratio < 1.0:
        raise ValueError(f"split_ratio must lie in (0, 1), got {split_ratio}")
    order = rng.permutation(n)
    n_train = min(n, max(1, int(round(split_ratio * n))))
    return np.sort(order[:n_train]), np.sort(order[n_train:])


def train_mlp(
    dataset: HybridDataset,
    split_ratio: float = DEFAULT_SPLIT_RATIO,
    epochs: int = DEFAULT_EPOCHS,
    lr: float = DEFAULT_LR,
    seed: int = 0,
    hidden: Sequence[int] = DEFAULT_HIDDEN,
    on_epoch_end: Optional[OnEpochEndCallable] = None,
) -> TrainingResult:
    """Trains the fusion MLP with full-batch Adam on MSE.

    Args:
        dataset (HybridDataset): Indicator samples and labels.
        split_ratio (float): Share of users used for training.
        epochs (int): Full-batch updates; ``0`` returns the initialization.
        lr (float): Adam learning rate.
        seed (int): Seeds the split, then the weight initialization.
        hidden (Sequence[int]): Hidden layer widths.
        on_epoch_end (Optional[OnEpochEndCallable]): Receives each epoch's training loss.

    Raises:
        ValueError: On an empty dataset or a bad split ratio.
        DivergenceError: If the loss stops being finite.
    """
    if dataset.n == 0 or dataset.r == 0:
        raise ValueError(f"Cannot train on an empty dataset ({dataset.display()})")

    rng = seeded_rng(seed)
    train_rows, test_rows = split_users(dataset.n, split_ratio, rng)
    train, test = dataset.subset(train_rows), dataset.subset(test_rows)

    sizes = [len(dataset.methods) * dataset.r, *hidden, dataset.r]
    model = init_mlp(sizes, rng)
    params = model.parameters()
    states = [AdamState.zeros_like(p, lr=lr) for p in params]

    result = TrainingResult(model=model, train_users=train.users, test_users=test.users)
    for epoch in range(epochs):
        loss, grads = loss_and_grads(model, train.x, train.y)
        if not np.isfinite(loss):
            raise DivergenceError(f"MLP training loss became non-finite at epoch {epoch + 1}")
        result.train_losses.append(loss)
        if test.n:
            result.validation_losses.append(mse(model, test))

        stepped = [adam_step(p, g, s) for p, g, s in zip(params, grads, states)]
        params = [p for p, _ in stepped]
        states = [s for _, s in stepped]
        model = MLPModel.from_parameters(params)

        if on_epoch_end is not None:
            on_epoch_end(epoch, loss)

    if not model.is_finite():
        raise DivergenceError("MLP parameters became non-finite")
    if result.train_losses:
        logging.info(
            "MLP %s: train loss %.6g -> %.6g over %d epochs",
            model.display(),
            result.train_losses[0],
            result.train_losses[-1],
            epochs,
        )
    result.model = model
    return result


def rank_scores(
    scores: np.ndarray,
    restaurants: List[BusinessId],
    k: int,
    support: Optional[np.ndarray] = None,
    excluded: Optional[np.ndarray] = None,
) -> List[BusinessId]:
    """Top ``k`` restaurants by score descending, id ascending on ties (``restaurants`` is sorted).

    With ``support`` the restaurants are ordered by support first and the scores only break its
    ties. Restaurants flagged in ``excluded`` are left out, so fewer than ``k`` may come back.
    """
    if not 0 <= k <= len(restaurants):
        raise ValueError(f"k must lie in [0, {len(restaurants)}], got {k}")
    keys = [np.arange(len(restaurants)), -np.asarray(scores, dtype=np.float64)]
    if support is not None:
        keys.append(-np.asarray(support, dtype=np.float64))
    order = np.lexsort(keys)
    if excluded is not None:
        order = order[~np.asarray(excluded, dtype=bool)[order]]
    return [restaurants[i] for i in order[:k]]


def predict_hybrid(model: MLPModel, x: np.ndarray, restaurants: List[BusinessId], k: int) -> List[BusinessId]:
    return rank_scores(mlp_forward(model, x), restaurants, k)


def predict_fused(
    model: MLPModel,
    x: np.ndarray,
    support: np.ndarray,
    rated: np.ndarray,
    restaurants: List[BusinessId],
    k: int,
) -> List[BusinessId]:
    """Fused ranking of one user: pooled neighbor votes first, the network's score among equal votes.

    Restaurants the user already rated are never recommended. A network whose rectified outputs
    collapse to a constant therefore falls back to vote pooling instead of to id order.
    """
    return rank_scores(mlp_forward(model, x), restaurants, k, support=support, excluded=rated)
