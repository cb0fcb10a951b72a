import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, List

import numpy as np

from grembed.errors import ConfigValidationError
from grembed.numerics.rng import seeded_rng
from grembed.utils import ensure_parent

REVIEWS_FILE = "reviews.json"
FRIENDS_FILE = "users.json"
COMMUNITIES_FILE = "communities.json"


@dataclass(frozen=True)
class SyntheticSpec:
    """
    Planted-community dataset: a stochastic block model for friendships plus community-biased tastes.

    Attributes:
    -----------
    communities : int
        Number of planted communities.
    users_per_community, restaurants_per_community : int
        Block sizes.
    intra_like, cross_like : float
        Probability of a 5-star review of a restaurant of the user's own / another community.
    dislike : float
        Probability of a 1-star review for any pair not liked.
    intra_friend, inter_friend : float
        Friendship probability within / across communities.
    seed : int
        Seed of the whole sample.
    """

    communities: int = 3
    users_per_community: int = 100
    restaurants_per_community: int = 50
    intra_like: float = 0.6
    cross_like: float = 0.02
    dislike: float = 0.05
    intra_friend: float = 0.1
    inter_friend: float = 0.005
    seed: int = 11

    def validate(self) -> List[str]:
        errors = []
        for name in ("communities", "users_per_community", "restaurants_per_community"):
            if getattr(self, name) < 1:
                errors.append(f"{name} must be >= 1")
        for name in ("intra_like", "cross_like", "dislike", "intra_friend", "inter_friend"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                errors.append(f"{name} must lie in [0, 1]")
        if self.communities > 1 and self.intra_like <= self.cross_like:
            errors.append("intra_like must exceed cross_like for a planted structure")
        if self.communities > 1 and self.intra_friend <= self.inter_friend:
            errors.append("intra_friend must exceed inter_friend for a planted structure")
        if max(self.intra_like, self.cross_like) + self.dislike > 1.0:
            errors.append("like and dislike probabilities must sum to at most 1")
        return errors


@dataclass
class SyntheticDataset:
    """Sampled reviews, friend lists and the planted community of every user and restaurant."""

    reviews: List[Dict[str, object]] = field(default_factory=list)
    friends: Dict[str, List[str]] = field(default_factory=dict)
    user_community: Dict[str, int] = field(default_factory=dict)
    restaurant_community: Dict[str, int] = field(default_factory=dict)


def sample_synthetic(spec: SyntheticSpec) -> SyntheticDataset:
    """Draws a planted-community dataset; identical specs give identical datasets.

    Raises:
        ConfigValidationError: If ``spec`` violates its constraints.
    """
    errors = spec.validate()
    if errors:
        raise ConfigValidationError(errors)

    rng = seeded_rng(spec.seed)
    users = [f"u{c:02d}_{i:04d}" for c in range(spec.communities) for i in range(spec.users_per_community)]
    items = [f"r{c:02d}_{j:04d}" for c in range(spec.communities) for j in range(spec.restaurants_per_community)]
    user_block = np.repeat(np.arange(spec.communities), spec.users_per_community)
    item_block = np.repeat(np.arange(spec.communities), spec.restaurants_per_community)

    same = user_block[:, None] == item_block[None, :]
    like_p = np.where(same, spec.intra_like, spec.cross_like)
    draws = rng.random(like_p.shape)
    stars = np.where(draws < like_p, 5, np.where(draws < like_p + spec.dislike, 1, 0))

    reviews = []
    for i, j in zip(*np.nonzero(stars)):
        reviews.append(
            {
                "review_id": f"rv{len(reviews):07d}",
                "user_id": users[i],
                "business_id": items[j],
                "stars": int(stars[i, j]),
            }
        )

    n = len(users)
    friend_p = np.where(user_block[:, None] == user_block[None, :], spec.intra_friend, spec.inter_friend)
    links = np.triu(rng.random((n, n)) < friend_p, k=1)
    links = links | links.T
    friends = {users[i]: [users[j] for j in np.flatnonzero(links[i])] for i in range(n)}

    logging.info(
        "Synthetic dataset: %d users, %d restaurants, %d reviews, %d friendships",
        n,
        len(items),
        len(reviews),
        int(links.sum()) // 2,
    )
    return SyntheticDataset(
        reviews=reviews,
        friends=friends,
        user_community={u: int(c) for u, c in zip(users, user_block)},
        restaurant_community={b: int(c) for b, c in zip(items, item_block)},
    )


def write_synthetic(dataset: SyntheticDataset, out_dir: str, spec: SyntheticSpec) -> List[str]:
    """Writes Yelp-shaped JSON-lines files plus the planted labels; friends use the comma-string form."""
    reviews_path = os.path.join(out_dir, REVIEWS_FILE)
    friends_path = os.path.join(out_dir, FRIENDS_FILE)
    communities_path = os.path.join(out_dir, COMMUNITIES_FILE)
    ensure_parent(reviews_path)

    with open(reviews_path, "w", encoding="utf-8") as fh:
        for review in dataset.reviews:
            fh.write(json.dumps(review, sort_keys=True) + "\n")
    with open(friends_path, "w", encoding="utf-8") as fh:
        for user, friends in dataset.friends.items():
            record = {"user_id": user, "friends": ", ".join(friends) if friends else "None"}
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    with open(communities_path, "w", encoding="utf-8") as fh:
        payload = {
            "spec": asdict(spec),
            "users": dataset.user_community,
            "restaurants": dataset.restaurant_community,
        }
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return [reviews_path, friends_path, communities_path]


def generate_synthetic(spec: SyntheticSpec, out_dir: str) -> List[str]:
    return write_synthetic(sample_synthetic(spec), out_dir, spec)
