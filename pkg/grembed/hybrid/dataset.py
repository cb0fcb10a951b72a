import logging
from typing import AbstractSet, Dict, List, Mapping, Optional, Sequence

import numpy as np

from grembed.embed.types import METHODS
from grembed.errors import MissingRecommendationError
from grembed.hybrid.types import HybridDataset
from grembed.ingest.types import BusinessId, UserId
from grembed.recommend.types import GroundTruth, Recommendations


def build_hybrid_dataset(
    cohort: List[UserId],
    per_embedding_recs: Dict[str, Recommendations],
    ground_truth: GroundTruth,
    methods: Sequence[str] = METHODS,
    weighted: bool = False,
    rated: Optional[Mapping[UserId, AbstractSet[BusinessId]]] = None,
) -> HybridDataset:
    """Builds the indicator tensor X and the label matrix Y over the union of the cohort's ground truth.

    Alongside X it records the neighbor votes summed over the embeddings (``support``) and, when
    ``rated`` is given, which restaurants each user already rated.

    Args:
        cohort (List[UserId]): Users to turn into samples, in order.
        per_embedding_recs (Dict[str, Recommendations]): Recommendations keyed by method.
        ground_truth (GroundTruth): Held-out high-rated sets, the labels.
        methods (Sequence[str]): Order of axis 1 of X.
        weighted (bool): Store vote weights instead of presence indicators.
        rated (Optional[Mapping[UserId, AbstractSet[BusinessId]]]): Visible liked and disliked items per user.

    Raises:
        MissingRecommendationError: If a cohort user lacks a list for some method.
    """
    restaurants = sorted(set().union(*(ground_truth.of(u) for u in cohort))) if cohort else []
    column = {b: j for j, b in enumerate(restaurants)}

    x = np.zeros((len(cohort), len(methods), len(restaurants)))
    y = np.zeros((len(cohort), len(restaurants)))
    support = np.zeros((len(cohort), len(restaurants)))
    seen = np.zeros((len(cohort), len(restaurants)), dtype=bool)
    for i, user in enumerate(cohort):
        for b in ground_truth.of(user):
            y[i, column[b]] = 1.0
        for e, method in enumerate(methods):
            recs = per_embedding_recs.get(method, {})
            if user not in recs:
                raise MissingRecommendationError(user, method)
            for b, w in recs[user]:
                if b in column:
                    x[i, e, column[b]] = float(w) if weighted else 1.0
                    support[i, column[b]] += float(w)
        for b in (rated or {}).get(user, ()):
            if b in column:
                seen[i, column[b]] = True

    logging.info("Hybrid dataset: %d users x %d methods x %d restaurants", len(cohort), len(methods), len(restaurants))
    return HybridDataset(
        users=list(cohort),
        restaurants=restaurants,
        methods=tuple(methods),
        x=x,
        y=y,
        support=support,
        rated=seen,
    )
