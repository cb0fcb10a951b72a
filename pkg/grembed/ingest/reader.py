import json
import logging
from typing import Any, Dict, Iterator, List, Set, Tuple

from grembed.errors import EmptyInputError, MalformedLineError, MissingFieldError
from grembed.ingest.types import MAX_STARS, MIN_STARS, FriendshipList, Review, UserId
from grembed.utils import ensure_parent

REVIEW_FIELDS = ("user_id", "business_id", "stars")
FRIEND_FIELDS = ("user_id", "friends")


def load_json_lines(path: str) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """Yields ``(line number, record)`` for every non-blank line of a JSON-lines file.

    Raises:
        MalformedLineError: If a line is not a JSON object.
    """
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedLineError(path, line_number, str(e)) from e
            if not isinstance(record, dict):
                raise MalformedLineError(path, line_number, "expected a JSON object")
            yield line_number, record


def _require(record: Dict[str, Any], fields: Tuple[str, ...], path: str, line_number: int) -> None:
    for name in fields:
        if name not in record:
            raise MissingFieldError(path, line_number, name)


def _parse_stars(raw: Any, path: str, line_number: int) -> int:
    try:
        value = float(raw)
    except (TypeError, ValueError) as e:
        raise MalformedLineError(path, line_number, f"stars is not a number: {raw!r}") from e
    if not value.is_integer() or not MIN_STARS <= value <= MAX_STARS:
        raise MalformedLineError(path, line_number, f"stars must be an integer in {MIN_STARS}..{MAX_STARS}: {raw!r}")
    return int(value)


def parse_friends_field(raw: Any) -> List[UserId]:
    """Accepts a JSON list or the comma-separated string of public Yelp dumps ("None" = no friends)."""
    if not raw or raw == "None":
        return []
    if isinstance(raw, list):
        return [str(x) for x in raw if x]
    return [x.strip() for x in str(raw).split(",") if x.strip()]


def deduplicate_reviews(reviews: List[Review]) -> List[Review]:
    """Keeps the highest-stars entry of every (user, business) pair; output sorted by pair."""
    best: Dict[Tuple[str, str], Review] = {}
    for review in reviews:
        key = (review.user, review.business)
        if key not in best or review.stars > best[key].stars:
            best[key] = review
    return [best[key] for key in sorted(best)]


def parse_reviews(path: str) -> List[Review]:
    """Parses and deduplicates a review JSON-lines file.

    Raises:
        MalformedLineError: On undecodable lines or invalid star values.
        MissingFieldError: If a record lacks ``user_id``, ``business_id`` or ``stars``.
        EmptyInputError: If the file holds no records.
    """
    raw: List[Review] = []
    for line_number, record in load_json_lines(path):
        _require(record, REVIEW_FIELDS, path, line_number)
        stars = _parse_stars(record["stars"], path, line_number)
        raw.append(Review(user=str(record["user_id"]), business=str(record["business_id"]), stars=stars))

    if not raw:
        raise EmptyInputError(f"No review records found in {path}")

    reviews = deduplicate_reviews(raw)
    if len(reviews) < len(raw):
        logging.info("Collapsed %d duplicate (user, business) reviews", len(raw) - len(reviews))
    return reviews


def parse_friendships(path: str) -> FriendshipList:
    """Parses a friend JSON-lines file into symmetrized pairs.

    Raises:
        MalformedLineError: On undecodable lines.
        MissingFieldError: If a record lacks ``user_id`` or ``friends``.
        EmptyInputError: If the file holds no records.
    """
    edges: List[Tuple[str, str]] = []
    records = 0
    for line_number, record in load_json_lines(path):
        _require(record, FRIEND_FIELDS, path, line_number)
        user = str(record["user_id"])
        edges.extend((user, friend) for friend in parse_friends_field(record["friends"]))
        records += 1

    if records == 0:
        raise EmptyInputError(f"No friend records found in {path}")

    return FriendshipList.from_edges(edges)


def parse_dataset(review_path: str, friends_path: str) -> Tuple[List[Review], FriendshipList]:
    """Parses a Yelp-shaped dataset.

    Args:
        review_path (str): JSON-lines file with ``user_id``, ``business_id`` and ``stars`` per line.
        friends_path (str): JSON-lines file with ``user_id`` and ``friends`` per line.

    Returns:
        Tuple[List[Review], FriendshipList]: Deduplicated reviews and symmetrized friendship pairs.
        Extra fields in either file are ignored.
    """
    reviews = parse_reviews(review_path)
    friendships = parse_friendships(friends_path)
    users: Set[str] = {r.user for r in reviews}
    logging.info(
        "Parsed %d reviews from %d users and %d friendship pairs", len(reviews), len(users), len(friendships)
    )
    return reviews, friendships


def save_friendships(path: str, friendships: FriendshipList) -> None:
    """Writes one ``user_id<TAB>user_id`` pair per line, sorted."""
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in friendships:
            fh.write(f"{a}\t{b}\n")


def load_friendships(path: str) -> FriendshipList:
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, 1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise MalformedLineError(path, line_number, "expected two tab-separated user ids")
            edges.append((parts[0], parts[1]))
    return FriendshipList.from_edges(edges)
