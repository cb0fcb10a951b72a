import logging
from typing import Optional

from grembed.embed.skipgram import train_sgns
from grembed.embed.types import DEFAULT_DIMENSIONS, Embedding, Node2VecParams, OnEpochEndCallable
from grembed.embed.walks import generate_walks
from grembed.socialgraph.types import WeightedGraph
from grembed.utils import derive_seed


def node2vec_embed(
    graph: WeightedGraph,
    params: Optional[Node2VecParams] = None,
    d: int = DEFAULT_DIMENSIONS,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
    on_epoch_end: Optional[OnEpochEndCallable] = None,
) -> Embedding:
    """node2vec: second-order walks fed to skip-gram training. Deterministic for a seed."""
    params = params or Node2VecParams()
    corpus = generate_walks(
        graph,
        p=params.p,
        q=params.q,
        walks_per_node=params.walks_per_node,
        walk_length=params.walk_length,
        seed=derive_seed(seed, "walks"),
        workers=workers,
        progress=progress,
    )
    embedding, losses = train_sgns(
        corpus,
        graph.users,
        d,
        window=params.window,
        negatives=params.negatives,
        epochs=params.epochs,
        lr=params.lr,
        seed=derive_seed(seed, "sgns"),
        on_epoch_end=on_epoch_end,
        progress=progress,
    )
    if losses:
        logging.info("node2vec: SGNS loss %.4f -> %.4f over %d epochs", losses[0], losses[-1], len(losses))
    return embedding.validate()
