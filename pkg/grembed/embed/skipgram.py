import logging
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from grembed.embed.types import NODE2VEC, Embedding, OnEpochEndCallable, WalkCorpus
from grembed.errors import DivergenceError
from grembed.ingest.types import UserId
from grembed.numerics.rng import seeded_rng

# Floor of the linearly decayed learning rate, as a share of the initial rate.
MIN_LR_RATIO = 1e-4


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return np.exp(-np.logaddexp(0.0, -x))


def sgns_loss_and_grads(
    center: np.ndarray, positives: np.ndarray, negatives: np.ndarray
) -> Tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Skip-gram negative-sampling loss for one center vector and its contexts.

    ``loss = sum_o [-log s(u.v_o) - sum_neg log s(-u.v_neg)]``.

    Args:
        center (np.ndarray): Center vector ``u``, shape ``(d,)``.
        positives (np.ndarray): Context vectors, shape ``(m, d)``.
        negatives (np.ndarray): Noise vectors per context, shape ``(m, k, d)``.

    Returns:
        Tuple[float, np.ndarray, np.ndarray, np.ndarray]: The loss and its gradients with respect to
        ``center``, ``positives`` and ``negatives``.
    """
    pos_scores = positives @ center
    neg_scores = negatives @ center
    loss = float(np.sum(np.logaddexp(0.0, -pos_scores)) + np.sum(np.logaddexp(0.0, neg_scores)))

    pos_coef = _sigmoid(pos_scores) - 1.0
    neg_coef = _sigmoid(neg_scores)
    grad_center = pos_coef @ positives + np.einsum("mk,mkd->d", neg_coef, negatives)
    grad_positives = pos_coef[:, None] * center
    grad_negatives = neg_coef[:, :, None] * center
    return loss, grad_center, grad_positives, grad_negatives


def noise_distribution(corpus: WalkCorpus, power: float = 0.75) -> np.ndarray:
    """Cumulative unigram-to-the-0.75 distribution over node indices."""
    counts = np.bincount(np.concatenate(corpus.walks), minlength=corpus.n_nodes).astype(np.float64)
    weights = counts**power
    return np.cumsum(weights) / np.sum(weights)


def initial_vectors(n: int, d: int, seed: int) -> np.ndarray:
    """word2vec-style initialization, uniform in ``[-0.5/d, 0.5/d)``."""
    return (seeded_rng(seed).random((n, d)) - 0.5) / d


def train_sgns(
    corpus: WalkCorpus,
    users: List[UserId],
    d: int,
    window: int = 10,
    negatives: int = 5,
    epochs: int = 5,
    lr: float = 0.025,
    seed: int = 0,
    on_epoch_end: Optional[OnEpochEndCallable] = None,
    progress: bool = False,
) -> Tuple[Embedding, List[float]]:
    """Trains skip-gram with negative sampling on a walk corpus.

    Every walk position is a center; the nodes within ``window`` steps on either side are its
    contexts, each paired with ``negatives`` noise nodes. The learning rate decays linearly over
    all epochs. A center moves by the mean of its pair gradients, so a wide window does not
    overshoot; contexts and noise nodes take one step per pair. Training is single-threaded, hence
    bit-deterministic for a seed.

    Returns:
        Tuple[Embedding, List[float]]: The center-vector embedding and the mean pair loss per epoch.

    Raises:
        ValueError: On an empty corpus or ``d < 1``.
        DivergenceError: If the loss stops being finite.
    """
    if len(corpus) == 0 or corpus.tokens == 0:
        raise ValueError("Cannot train on an empty walk corpus")
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    if len(users) != corpus.n_nodes:
        raise ValueError(f"Corpus covers {corpus.n_nodes} nodes but {len(users)} users were given")

    rng = seeded_rng(seed + 1)
    center = initial_vectors(corpus.n_nodes, d, seed)
    context = np.zeros((corpus.n_nodes, d))
    noise = noise_distribution(corpus)
    last = corpus.n_nodes - 1

    total = max(epochs * corpus.tokens, 1)
    processed = 0
    losses: List[float] = []

    for epoch in range(epochs):
        epoch_loss = 0.0
        pairs = 0
        for walk in tqdm(corpus.walks, desc=f"sgns epoch {epoch + 1}", disable=not progress):
            length = len(walk)
            for pos in range(length):
                alpha = lr * max(MIN_LR_RATIO, 1.0 - processed / total)
                processed += 1

                ctx = np.concatenate((walk[max(0, pos - window) : pos], walk[pos + 1 : pos + window + 1]))
                if ctx.size == 0:
                    continue
                noise_ids = np.minimum(np.searchsorted(noise, rng.random((ctx.size, negatives)), side="right"), last)

                c = walk[pos]
                loss, g_center, g_pos, g_neg = sgns_loss_and_grads(center[c], context[ctx], context[noise_ids])
                # mean over the window's pairs, which all saw the same center
                center[c] -= alpha * g_center / ctx.size
                np.add.at(context, ctx, -alpha * g_pos)
                np.add.at(context, noise_ids, -alpha * g_neg)

                epoch_loss += loss
                pairs += ctx.size

        mean_loss = epoch_loss / max(pairs, 1)
        if not np.isfinite(mean_loss):
            raise DivergenceError(f"SGNS loss became non-finite in epoch {epoch + 1}")
        losses.append(mean_loss)
        logging.debug("SGNS epoch %d: mean pair loss %.6f", epoch + 1, mean_loss)
        if on_epoch_end is not None:
            on_epoch_end(epoch, mean_loss)

    return Embedding(method=NODE2VEC, vectors=center, users=list(users)), losses
