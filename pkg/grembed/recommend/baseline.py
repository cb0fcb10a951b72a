import logging
from typing import Iterable, List, Optional

from grembed.ingest.types import BusinessId, UserId
from grembed.numerics.rng import seeded_rng
from grembed.recommend.types import GroundTruth, Recommendations, WeightedRecommendations
from grembed.utils import derive_seed


def random_recommendations(
    users: List[UserId],
    universe: Iterable[BusinessId],
    k: int,
    seed: int,
    exclude: Optional[GroundTruth] = None,
) -> Recommendations:
    """Seeded random recommender used as the coverage baseline.

    Every user draws ``k`` distinct restaurants uniformly from ``universe`` (minus their own
    ``exclude`` items) with a stream keyed by ``(seed, user)``. All weights are 1, so lists are
    ordered by id.
    """
    ordered = sorted(set(universe))
    recs: Recommendations = {}
    for user in users:
        own = exclude.of(user) if exclude is not None else frozenset()
        pool = [b for b in ordered if b not in own]
        count = min(k, len(pool))
        picks = seeded_rng(derive_seed(seed, user)).choice(len(pool), size=count, replace=False)
        recs[user] = WeightedRecommendations(user=user, items=sorted((pool[i], 1) for i in picks))
    logging.info("Random baseline: %d users, %d items each from %d restaurants", len(users), k, len(ordered))
    return recs
