from typing import Sequence, Tuple

from grembed.errors import ZeroRatedUserError, ZeroRecommendationError


def mae(per_user: Sequence[Tuple[int, int]]) -> float:
    """Mean over users of ``|N_r - N_hit| / N_r``, the miss rate of each recommendation list.

    Raises:
        ZeroRecommendationError: If some user has ``N_r == 0``; callers exclude such users first.
        ValueError: On an empty input or ``N_hit > N_r``.
    """
    if not per_user:
        raise ValueError("mae needs at least one user")
    total = 0.0
    for i, (n_r, n_hit) in enumerate(per_user):
        if n_r <= 0:
            raise ZeroRecommendationError(f"User #{i} has no recommendation; exclude it before computing MAE")
        if not 0 <= n_hit <= n_r:
            raise ValueError(f"User #{i}: N_hit={n_hit} must lie in [0, N_r={n_r}]")
        total += abs(n_r - n_hit) / n_r
    return total / len(per_user)


def coverage(per_user: Sequence[Tuple[int, int]]) -> float:
    """Mean over users of ``N_hit / N_u``, as a percentage.

    Raises:
        ZeroRatedUserError: If some user has an empty ground truth (``N_u == 0``).
        ValueError: On an empty input or ``N_hit > N_u``.
    """
    if not per_user:
        raise ValueError("coverage needs at least one user")
    total = 0.0
    for i, (n_hit, n_u) in enumerate(per_user):
        if n_u <= 0:
            raise ZeroRatedUserError(f"User #{i} has an empty ground truth; coverage is undefined")
        if not 0 <= n_hit <= n_u:
            raise ValueError(f"User #{i}: N_hit={n_hit} must lie in [0, N_u={n_u}]")
        total += n_hit / n_u
    return 100.0 * total / len(per_user)
