from .hope import hope_embed, katz_proximity
from .node2vec import node2vec_embed
from .skipgram import initial_vectors, noise_distribution, sgns_loss_and_grads, train_sgns
from .spectral import DEFAULT_DIFFUSION_TIME, heat_kernel_weights, normalized_laplacian, spectral_embed
from .types import (
    DEFAULT_DIMENSIONS,
    HOPE,
    METHODS,
    NODE2VEC,
    SPECTRAL,
    Embedding,
    Node2VecParams,
    OnEpochEndCallable,
    WalkCorpus,
    load_embedding,
    save_embedding,
)
from .walks import generate_walks, next_node, transition_weights


__all__ = [
    "DEFAULT_DIFFUSION_TIME",
    "DEFAULT_DIMENSIONS",
    "HOPE",
    "METHODS",
    "NODE2VEC",
    "SPECTRAL",
    "Embedding",
    "Node2VecParams",
    "OnEpochEndCallable",
    "WalkCorpus",
    "generate_walks",
    "heat_kernel_weights",
    "hope_embed",
    "initial_vectors",
    "katz_proximity",
    "load_embedding",
    "next_node",
    "node2vec_embed",
    "noise_distribution",
    "normalized_laplacian",
    "save_embedding",
    "sgns_loss_and_grads",
    "spectral_embed",
    "train_sgns",
    "transition_weights",
]
