from .baseline import random_recommendations
from .recommender import (
    DEFAULT_LOWER_BOUND,
    DEFAULT_NEIGHBORS,
    DEFAULT_UPPER_BOUND,
    common_recommendations,
    eligible_recommenders,
    nearest_in_cluster,
    rank_votes,
    recommend_all,
    recommend_for_user,
    select_top_users,
)
from .storage import load_recommendations, save_recommendations
from .types import GroundTruth, Recommendations, WeightedRecommendations


__all__ = [
    "DEFAULT_LOWER_BOUND",
    "DEFAULT_NEIGHBORS",
    "DEFAULT_UPPER_BOUND",
    "GroundTruth",
    "Recommendations",
    "WeightedRecommendations",
    "common_recommendations",
    "eligible_recommenders",
    "load_recommendations",
    "nearest_in_cluster",
    "random_recommendations",
    "rank_votes",
    "recommend_all",
    "recommend_for_user",
    "save_recommendations",
    "select_top_users",
]
