from .activity import DEFAULT_MIN_REVIEWS, filter_active_users
from .ratings import (
    DEFAULT_HIGH_THRESHOLD,
    DEFAULT_LOW_THRESHOLD,
    build_ratings_table,
    load_item_sets,
    load_ratings_table,
    save_item_sets,
    save_ratings_table,
    split_holdout,
)
from .reader import (
    deduplicate_reviews,
    load_friendships,
    parse_dataset,
    parse_friends_field,
    parse_friendships,
    parse_reviews,
    save_friendships,
)
from .types import BusinessId, FriendshipList, RatingsTable, Review, UserId


__all__ = [
    "DEFAULT_HIGH_THRESHOLD",
    "DEFAULT_LOW_THRESHOLD",
    "DEFAULT_MIN_REVIEWS",
    "BusinessId",
    "FriendshipList",
    "RatingsTable",
    "Review",
    "UserId",
    "build_ratings_table",
    "deduplicate_reviews",
    "load_friendships",
    "filter_active_users",
    "load_item_sets",
    "load_ratings_table",
    "parse_dataset",
    "parse_friends_field",
    "parse_friendships",
    "parse_reviews",
    "save_friendships",
    "save_item_sets",
    "save_ratings_table",
    "split_holdout",
]
