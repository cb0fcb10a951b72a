import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np
from tqdm import tqdm

from grembed.embed.types import WalkCorpus
from grembed.numerics.rng import child_rng
from grembed.socialgraph.types import WeightedGraph


def transition_weights(graph: WeightedGraph, prev: Optional[int], cur: int, p: float, q: float) -> np.ndarray:
    """Unnormalized probabilities of stepping from ``cur`` to each of its neighbors.

    With no previous node this is the edge weight. Otherwise a neighbor ``x`` gets ``w/p`` when it is
    ``prev`` (return), ``w`` when it is also a neighbor of ``prev``, and ``w/q`` when it moves away.
    """
    weights = graph.weights[cur]
    if prev is None:
        return weights.copy()

    nbrs = graph.neighbors[cur]
    prev_nbrs = graph.neighbors[prev]
    pos = np.minimum(np.searchsorted(prev_nbrs, nbrs), max(len(prev_nbrs) - 1, 0))
    shared = prev_nbrs[pos] == nbrs if len(prev_nbrs) else np.zeros(len(nbrs), dtype=bool)
    return np.where(nbrs == prev, weights / p, np.where(shared, weights, weights / q))


def next_node(
    graph: WeightedGraph, prev: Optional[int], cur: int, p: float, q: float, rng: np.random.Generator
) -> Optional[int]:
    """Samples the next node of a walk, or ``None`` at a dead end."""
    if len(graph.neighbors[cur]) == 0:
        return None
    cumulative = np.cumsum(transition_weights(graph, prev, cur, p, q))
    if cumulative[-1] <= 0.0:
        return None
    pick = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return int(graph.neighbors[cur][min(pick, len(cumulative) - 1)])


def _walks_from(
    graph: WeightedGraph, source: int, p: float, q: float, walks_per_node: int, walk_length: int, seed: int
) -> List[np.ndarray]:
    rng = child_rng(seed, source)
    walks = []
    for _ in range(walks_per_node):
        walk = [source]
        prev: Optional[int] = None
        while len(walk) < walk_length:
            step = next_node(graph, prev, walk[-1], p, q, rng)
            if step is None:
                break
            prev = walk[-1]
            walk.append(step)
        walks.append(np.array(walk, dtype=np.int64))
    return walks


def generate_walks(
    graph: WeightedGraph,
    p: float = 1.0,
    q: float = 1.0,
    walks_per_node: int = 10,
    walk_length: int = 80,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
) -> WalkCorpus:
    """Samples node2vec second-order walks from every node with at least one neighbor.

    Each source node draws from its own stream keyed by ``(seed, node index)``, so the corpus is the
    same for any ``workers`` count.

    Args:
        graph (WeightedGraph): Graph to walk on.
        p (float): Return parameter, ``> 0``.
        q (float): In-out parameter, ``> 0``.
        walks_per_node (int): Walks started from each node.
        walk_length (int): Maximum walk length, ``>= 2``.
        seed (int): Stage seed.
        workers (int): Threads used to generate walks.
        progress (bool): Show a progress bar.

    Returns:
        WalkCorpus: Walks in node-major order.
    """
    if p <= 0 or q <= 0:
        raise ValueError(f"p and q must be positive, got p={p}, q={q}")
    if walk_length < 2:
        raise ValueError(f"walk_length must be at least 2, got {walk_length}")
    if walks_per_node < 1:
        raise ValueError(f"walks_per_node must be at least 1, got {walks_per_node}")

    sources = [i for i in range(graph.n) if len(graph.neighbors[i]) > 0]
    job = lambda source: _walks_from(graph, source, p, q, walks_per_node, walk_length, seed)  # noqa: E731

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_node = list(tqdm(pool.map(job, sources), total=len(sources), desc="walks", disable=not progress))
    else:
        per_node = [job(source) for source in tqdm(sources, desc="walks", disable=not progress)]

    walks = [walk for node_walks in per_node for walk in node_walks]
    logging.info("Generated %d walks (p=%g, q=%g) from %d source nodes", len(walks), p, q, len(sources))
    return WalkCorpus(
        walks=walks, n_nodes=graph.n, walk_length=walk_length, walks_per_node=walks_per_node, p=p, q=q
    )
