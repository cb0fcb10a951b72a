import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Set

import numpy as np

from grembed.cluster.kmeans import predict_cluster
from grembed.cluster.types import Clustering
from grembed.embed.types import Embedding
from grembed.errors import ColdUserError
from grembed.ingest.types import BusinessId, UserId
from grembed.recommend.types import GroundTruth, Recommendations, WeightedRecommendations
from grembed.socialgraph.types import WeightedGraph

DEFAULT_LOWER_BOUND = 5
DEFAULT_UPPER_BOUND = 50
DEFAULT_NEIGHBORS = 10


def select_top_users(graph: WeightedGraph, count: int, among: Optional[Iterable[UserId]] = None) -> List[UserId]:
    """Users ranked by weighted degree, highest first, lower id first on ties.

    Args:
        graph (WeightedGraph): The implicit weighted graph.
        count (int): How many users to return.
        among (Optional[Iterable[UserId]]): Restricts the ranking to these graph users.

    Raises:
        ValueError: If ``count`` exceeds the number of ranked users.
    """
    pool = graph.users if among is None else sorted(set(among) & set(graph.index_of))
    if count > len(pool):
        raise ValueError(f"Requested {count} top users but only {len(pool)} are available")
    ranked = sorted(pool, key=lambda u: (-graph.weighted_degree(graph.index_of[u]), u))
    return ranked[:count]


def eligible_recommenders(
    ground_truth: GroundTruth, lower: int = DEFAULT_LOWER_BOUND, upper: int = DEFAULT_UPPER_BOUND
) -> Set[UserId]:
    """Users whose high-rated set size lies in ``[lower, upper]``."""
    if not 1 <= lower <= upper:
        raise ValueError(f"Need 1 <= lower <= upper, got lower={lower}, upper={upper}")
    return {u for u, items in ground_truth.high_rated.items() if lower <= len(items) <= upper}


def nearest_in_cluster(
    user: UserId, embedding: Embedding, clustering: Clustering, eligible: Set[UserId], n_neighbors: int
) -> List[UserId]:
    """Up to ``n_neighbors`` eligible users of the query user's predicted cluster, nearest first."""
    if user not in embedding:
        raise ColdUserError(f"User '{user}' has no {embedding.method} embedding row")
    if n_neighbors < 1:
        raise ValueError(f"n_neighbors must be at least 1, got {n_neighbors}")

    query = embedding.vector_of(user)
    cluster = predict_cluster(clustering, query)
    candidates = [
        u
        for u in sorted(eligible)
        if u != user and u in embedding and clustering.assignment[embedding.index_of[u]] == cluster
    ]
    if not candidates:
        return []

    rows = embedding.vectors[[embedding.index_of[u] for u in candidates]]
    diff = rows - query
    dist = np.einsum("nd,nd->n", diff, diff)
    order = sorted(range(len(candidates)), key=lambda i: (dist[i], candidates[i]))
    return [candidates[i] for i in order[:n_neighbors]]


def rank_votes(
    user: UserId, neighbors: List[UserId], ground_truth: GroundTruth, k: Optional[int] = None
) -> WeightedRecommendations:
    """Counts how many neighbors rated each restaurant high, drops the user's own items and ranks."""
    votes: Counter = Counter()
    for neighbor in neighbors:
        votes.update(ground_truth.of(neighbor))
    for own in ground_truth.of(user):
        votes.pop(own, None)

    items = sorted(votes.items(), key=lambda item: (-item[1], item[0]))
    if k is not None:
        items = items[:k]
    return WeightedRecommendations(user=user, items=items)


def recommend_for_user(
    user: UserId,
    embedding: Embedding,
    clustering: Clustering,
    ground_truth: GroundTruth,
    eligible: Set[UserId],
    n_neighbors: int = DEFAULT_NEIGHBORS,
    k: Optional[int] = None,
) -> WeightedRecommendations:
    """Recommends restaurants liked by the user's nearest eligible neighbors within their cluster.

    An isolated cluster yields an empty list.

    Raises:
        ColdUserError: If the user has no embedding row.
    """
    if k is not None and k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    neighbors = nearest_in_cluster(user, embedding, clustering, eligible, n_neighbors)
    return rank_votes(user, neighbors, ground_truth, k)


def recommend_all(
    users: List[UserId],
    embedding: Embedding,
    clustering: Clustering,
    ground_truth: GroundTruth,
    eligible: Set[UserId],
    n_neighbors: int = DEFAULT_NEIGHBORS,
    k: Optional[int] = None,
    workers: int = 1,
) -> Recommendations:
    """Runs :func:`recommend_for_user` for every user against the shared, read-only inputs."""

    def job(user: UserId) -> WeightedRecommendations:
        return recommend_for_user(user, embedding, clustering, ground_truth, eligible, n_neighbors, k)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, users))
    else:
        results = [job(u) for u in users]

    empty = sum(1 for r in results if len(r) == 0)
    if empty:
        logging.warning(
            "%s: %d of %d users got no recommendation (isolated cluster)", embedding.method, empty, len(users)
        )
    return {r.user: r for r in results}


def common_recommendations(recommended: WeightedRecommendations, truth: Iterable[BusinessId]) -> Set[BusinessId]:
    return set(recommended.item_ids) & set(truth)
