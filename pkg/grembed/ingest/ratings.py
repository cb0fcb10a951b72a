import json
import logging
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

from grembed.ingest.reader import deduplicate_reviews
from grembed.ingest.types import BusinessId, RatingsTable, Review, UserId
from grembed.numerics.rng import seeded_rng
from grembed.utils import derive_seed, ensure_parent

DEFAULT_HIGH_THRESHOLD = 4
DEFAULT_LOW_THRESHOLD = 2


def build_ratings_table(
    reviews: List[Review],
    users: Iterable[UserId],
    high_threshold: int = DEFAULT_HIGH_THRESHOLD,
    low_threshold: int = DEFAULT_LOW_THRESHOLD,
) -> RatingsTable:
    """Splits each user's reviews into liked and disliked business sets.

    Reviews with ``low_threshold < stars < high_threshold`` are neutral and land in neither set.
    Every user of ``users`` gets an entry, possibly with empty sets.

    Raises:
        ValueError: If ``low_threshold >= high_threshold``.
    """
    if low_threshold >= high_threshold:
        raise ValueError(f"low_threshold ({low_threshold}) must be below high_threshold ({high_threshold})")

    keep = set(users)
    liked: Dict[UserId, Set[BusinessId]] = {u: set() for u in keep}
    disliked: Dict[UserId, Set[BusinessId]] = {u: set() for u in keep}

    for review in deduplicate_reviews([r for r in reviews if r.user in keep]):
        if review.stars >= high_threshold:
            liked[review.user].add(review.business)
        elif review.stars <= low_threshold:
            disliked[review.user].add(review.business)

    return RatingsTable(
        liked={u: frozenset(s) for u, s in sorted(liked.items())},
        disliked={u: frozenset(s) for u, s in sorted(disliked.items())},
        high_threshold=high_threshold,
        low_threshold=low_threshold,
    )


def split_holdout(
    ratings: RatingsTable, fraction: float, seed: int
) -> Tuple[RatingsTable, Dict[UserId, FrozenSet[BusinessId]]]:
    """Hides a seeded share of every user's liked set.

    The hidden items become the user's evaluation ground truth; the returned table keeps the
    rest. Each user draws from a stream keyed by ``(seed, user id)``, so the split of one user
    does not depend on who else is in the table. Users with fewer than two liked items keep
    everything visible.

    Args:
        ratings (RatingsTable): Full ratings.
        fraction (float): Share of liked items to hide, in ``[0, 1)``.
        seed (int): Stage seed.

    Returns:
        Tuple[RatingsTable, Dict[UserId, FrozenSet[BusinessId]]]: Visible ratings and held-out sets.
    """
    if not 0.0 <= fraction < 1.0:
        raise ValueError(f"fraction must lie in [0, 1), got {fraction}")

    visible: Dict[UserId, FrozenSet[BusinessId]] = {}
    held_out: Dict[UserId, FrozenSet[BusinessId]] = {}
    for user, items in ratings.liked.items():
        count = int(fraction * len(items)) if len(items) >= 2 else 0
        ordered = sorted(items)
        if count == 0:
            visible[user] = frozenset(ordered)
            held_out[user] = frozenset()
            continue
        picks = seeded_rng(derive_seed(seed, user)).permutation(len(ordered))
        hidden = {ordered[i] for i in picks[:count]}
        held_out[user] = frozenset(hidden)
        visible[user] = frozenset(b for b in ordered if b not in hidden)

    logging.info(
        "Held out %d of %d liked items across %d users",
        sum(len(s) for s in held_out.values()),
        sum(len(s) for s in ratings.liked.values()),
        len(held_out),
    )
    table = RatingsTable(
        liked=visible,
        disliked=dict(ratings.disliked),
        high_threshold=ratings.high_threshold,
        low_threshold=ratings.low_threshold,
    )
    return table, held_out


def save_ratings_table(path: str, ratings: RatingsTable) -> None:
    """Writes ``{user_id: {"liked": [...], "disliked": [...]}}`` with sorted keys and lists."""
    payload = {
        user: {"liked": sorted(ratings.liked_by(user)), "disliked": sorted(ratings.disliked_by(user))}
        for user in ratings.users
    }
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_ratings_table(
    path: str, high_threshold: int = DEFAULT_HIGH_THRESHOLD, low_threshold: int = DEFAULT_LOW_THRESHOLD
) -> RatingsTable:
    """Reads a table written by :func:`save_ratings_table`; thresholds come from the caller's config."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return RatingsTable(
        liked={u: frozenset(v.get("liked", [])) for u, v in sorted(payload.items())},
        disliked={u: frozenset(v.get("disliked", [])) for u, v in sorted(payload.items())},
        high_threshold=high_threshold,
        low_threshold=low_threshold,
    )


def save_item_sets(path: str, sets: Dict[str, FrozenSet[str]]) -> None:
    """Writes a ``{key: [sorted items]}`` JSON file."""
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({k: sorted(v) for k, v in sorted(sets.items())}, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_item_sets(path: str) -> Dict[str, FrozenSet[str]]:
    with open(path, "r", encoding="utf-8") as fh:
        return {k: frozenset(v) for k, v in sorted(json.load(fh).items())}
