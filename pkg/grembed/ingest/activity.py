import logging
from collections import Counter
from typing import List, Set

from grembed.errors import EmptyResultError
from grembed.ingest.types import FriendshipList, Review, UserId

# Declared default for "active": the source data never fixes a number.
DEFAULT_MIN_REVIEWS = 10


def filter_active_users(
    reviews: List[Review], friendships: FriendshipList, min_reviews: int = DEFAULT_MIN_REVIEWS
) -> Set[UserId]:
    """Selects the active users of a dataset.

    A user is active when they have at least ``min_reviews`` deduplicated reviews and at least
    one friend who also meets that review threshold.

    Args:
        reviews (List[Review]): Deduplicated reviews.
        friendships (FriendshipList): Symmetrized friendship pairs.
        min_reviews (int): Review-count threshold, at least 1.

    Returns:
        Set[UserId]: The active users.

    Raises:
        ValueError: If ``min_reviews`` is below 1.
        EmptyResultError: If nobody survives both conditions.
    """
    if min_reviews < 1:
        raise ValueError(f"min_reviews must be at least 1, got {min_reviews}")

    counts = Counter(review.user for review in reviews)
    reviewed_enough = {user for user, count in counts.items() if count >= min_reviews}

    active: Set[UserId] = set()
    for a, b in friendships.pairs:
        if a in reviewed_enough and b in reviewed_enough:
            active.add(a)
            active.add(b)

    logging.info(
        "%d users have >= %d reviews; %d of them have a friend above the same threshold",
        len(reviewed_enough),
        min_reviews,
        len(active),
    )

    if not active:
        raise EmptyResultError(
            f"No active users: nobody has >= {min_reviews} reviews and a friend with as many; lower the threshold"
        )
    return active
