from typing import AbstractSet

from grembed.ingest.types import BusinessId


def similarity_weight(
    liked_i: AbstractSet[BusinessId],
    disliked_i: AbstractSet[BusinessId],
    liked_j: AbstractSet[BusinessId],
    disliked_j: AbstractSet[BusinessId],
) -> float:
    """Taste similarity of two users.

    ``(|L_i & L_j| + |D_i & D_j|) / |L_i | L_j | D_i | D_j|``: shared likes plus shared dislikes,
    normalized by everything either user rated, so heavy raters get no bias. Two users with no
    rated items score 0.
    """
    union = len(liked_i | liked_j | disliked_i | disliked_j)
    if union == 0:
        return 0.0
    return (len(liked_i & liked_j) + len(disliked_i & disliked_j)) / union
