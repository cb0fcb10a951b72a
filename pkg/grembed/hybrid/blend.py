import logging
from typing import List, Optional, Tuple

import numpy as np

from grembed.hybrid.mlp import rank_scores
from grembed.hybrid.types import HybridDataset
from grembed.ingest.types import BusinessId

DEFAULT_BLEND_EPOCHS = 2000
DEFAULT_BLEND_LR = 0.1


def blend_scores(alpha: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``sum_e alpha_e * x[..., e, :]`` for one sample or a batch."""
    return np.einsum("e,...er->...r", np.asarray(alpha, dtype=np.float64), x)


def blend_loss_and_grad(alpha: np.ndarray, x: np.ndarray, y: np.ndarray) -> Tuple[float, np.ndarray]:
    residual = blend_scores(alpha, x) - y
    loss = float(np.mean(residual**2))
    grad = 2.0 * np.einsum("nr,ner->e", residual, x) / residual.size
    return loss, grad


def fit_linear_blend(
    dataset: HybridDataset, epochs: int = DEFAULT_BLEND_EPOCHS, lr: float = DEFAULT_BLEND_LR
) -> np.ndarray:
    """Learns one scalar weight per embedding by plain gradient descent on MSE, starting from zero."""
    if dataset.n == 0 or dataset.r == 0:
        raise ValueError(f"Cannot fit a blend on an empty dataset ({dataset.display()})")

    alpha = np.zeros(len(dataset.methods))
    loss = float("nan")
    for _ in range(epochs):
        loss, grad = blend_loss_and_grad(alpha, dataset.x, dataset.y)
        alpha = alpha - lr * grad
    logging.info(
        "Linear blend weights %s (loss %.6g)", dict(zip(dataset.methods, np.round(alpha, 6).tolist())), loss
    )
    return alpha


def predict_blend(
    alpha: np.ndarray,
    x: np.ndarray,
    restaurants: List[BusinessId],
    k: int,
    excluded: Optional[np.ndarray] = None,
) -> List[BusinessId]:
    return rank_scores(blend_scores(alpha, x), restaurants, k, excluded=excluded)
