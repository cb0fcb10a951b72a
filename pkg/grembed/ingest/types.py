from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Set, Tuple

UserId = str
BusinessId = str

MIN_STARS = 1
MAX_STARS = 5


@dataclass(frozen=True, order=True)
class Review:
    """
    One star rating of a business by a user.

    Attributes:
    -----------
    user : UserId
        Opaque user id.
    business : BusinessId
        Opaque business id.
    stars : int
        Rating in 1..5.
    """

    user: UserId
    business: BusinessId
    stars: int

    def __post_init__(self) -> None:
        if not MIN_STARS <= self.stars <= MAX_STARS:
            raise ValueError(f"stars must lie in {MIN_STARS}..{MAX_STARS}, got {self.stars}")


@dataclass(frozen=True)
class FriendshipList:
    """
    Undirected friendship pairs, each stored once as ``(smaller id, larger id)``.
    """

    pairs: FrozenSet[Tuple[UserId, UserId]] = field(default_factory=frozenset)

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[UserId, UserId]]) -> "FriendshipList":
        """Symmetrizes ``edges``, dropping self-pairs and duplicates in either direction."""
        return cls(frozenset((min(a, b), max(a, b)) for a, b in edges if a != b))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Tuple[UserId, UserId]]:
        return iter(sorted(self.pairs))

    def __contains__(self, pair: object) -> bool:
        if not isinstance(pair, tuple) or len(pair) != 2:
            return False
        a, b = pair
        return (min(a, b), max(a, b)) in self.pairs

    def users(self) -> Set[UserId]:
        return {u for pair in self.pairs for u in pair}

    def restricted_to(self, users: Set[UserId]) -> "FriendshipList":
        """Keeps only pairs whose both endpoints are in ``users``."""
        return FriendshipList(frozenset(p for p in self.pairs if p[0] in users and p[1] in users))


@dataclass(frozen=True)
class RatingsTable:
    """
    Per-user liked (``stars >= high_threshold``) and disliked (``stars <= low_threshold``) sets.

    Attributes:
    -----------
    liked : Dict[UserId, FrozenSet[BusinessId]]
        The L sets of the similarity weight.
    disliked : Dict[UserId, FrozenSet[BusinessId]]
        The D sets of the similarity weight.
    high_threshold, low_threshold : int
        Star cut-offs used to build the sets.
    """

    liked: Dict[UserId, FrozenSet[BusinessId]]
    disliked: Dict[UserId, FrozenSet[BusinessId]]
    high_threshold: int
    low_threshold: int

    @property
    def users(self) -> List[UserId]:
        return sorted(set(self.liked) | set(self.disliked))

    def liked_by(self, user: UserId) -> FrozenSet[BusinessId]:
        return self.liked.get(user, frozenset())

    def disliked_by(self, user: UserId) -> FrozenSet[BusinessId]:
        return self.disliked.get(user, frozenset())

    def display(self) -> str:
        liked = sum(len(s) for s in self.liked.values())
        disliked = sum(len(s) for s in self.disliked.values())
        return (
            f"RatingsTable(users={len(self.users)}, liked={liked}, disliked={disliked}, "
            f"high>={self.high_threshold}, low<={self.low_threshold})"
        )
