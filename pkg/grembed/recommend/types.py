from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Tuple

from grembed.ingest.types import BusinessId, UserId


@dataclass(frozen=True)
class GroundTruth:
    """
    High-rated restaurants per user.

    The recommender reads the visible liked sets through it; evaluation and the hybrid labels read
    the held-out sets.

    Attributes:
    -----------
    high_rated : Dict[UserId, FrozenSet[BusinessId]]
        Items each user rated high.
    """

    high_rated: Dict[UserId, FrozenSet[BusinessId]] = field(default_factory=dict)

    def of(self, user: UserId) -> FrozenSet[BusinessId]:
        return self.high_rated.get(user, frozenset())

    def __contains__(self, user: object) -> bool:
        return user in self.high_rated

    @property
    def users(self) -> List[UserId]:
        return sorted(self.high_rated)


@dataclass(frozen=True)
class WeightedRecommendations:
    """
    Ranked restaurants for one user with their neighbor-vote weights.

    Attributes:
    -----------
    user : UserId
        The query user.
    items : List[Tuple[BusinessId, int]]
        ``(restaurant, weight)`` pairs, weight descending then id ascending.
    """

    user: UserId
    items: List[Tuple[BusinessId, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        ids = [b for b, _ in self.items]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Duplicate restaurants in the recommendations for '{self.user}'")
        if any(w < 1 for _, w in self.items):
            raise ValueError(f"Recommendation weights for '{self.user}' must be positive")
        if self.items != sorted(self.items, key=lambda item: (-item[1], item[0])):
            raise ValueError(f"Recommendations for '{self.user}' are not sorted by weight then id")

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Tuple[BusinessId, int]]:
        return iter(self.items)

    @property
    def item_ids(self) -> List[BusinessId]:
        return [b for b, _ in self.items]

    def weight_of(self, business: BusinessId) -> int:
        return dict(self.items).get(business, 0)

    def display(self) -> str:
        head = ", ".join(f"{b}:{w}" for b, w in self.items[:5])
        more = f", ... (+{len(self.items) - 5})" if len(self.items) > 5 else ""
        return f"{self.user} -> [{head}{more}]"


Recommendations = Dict[UserId, WeightedRecommendations]
"""
Recommendations maps every query user to their ranked list produced by one method.
"""
