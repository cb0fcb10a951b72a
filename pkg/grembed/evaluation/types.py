from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from grembed.ingest.types import UserId


@dataclass(frozen=True)
class UserRow:
    """
    Per-user counts behind the summary metrics.

    Attributes:
    -----------
    user : UserId
        The evaluated user.
    n_r : int
        Recommendations considered, ``min(k, list length)``.
    n_hit : int
        Considered recommendations found in the user's ground truth.
    n_u : int
        Size of the user's ground truth.
    """

    user: UserId
    n_r: int
    n_hit: int
    n_u: int


@dataclass(frozen=True)
class EvalReport:
    """
    Coverage and MAE of one method at one recommendation count.

    Attributes:
    -----------
    method : str
        Method tag, e.g. ``node2vec`` or ``hybrid (test)``.
    k : int
        Recommendation count.
    coverage_percent : float
        Mean of ``n_hit / n_u`` over all rows, times 100.
    mae : Optional[float]
        Mean of ``|n_r - n_hit| / n_r`` over rows with ``n_r >= 1``; ``None`` when no row qualifies.
    rows : List[UserRow]
        Per-user counts in evaluation order.
    excluded_users : List[UserId]
        Users left out of MAE because they received no recommendation.
    """

    method: str
    k: int
    coverage_percent: float
    mae: Optional[float]
    rows: List[UserRow] = field(default_factory=list)
    excluded_users: List[UserId] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def display(self) -> str:
        mae = "n/a" if self.mae is None else f"{self.mae:.4f}"
        return (
            f"{self.method} @ k={self.k}: coverage {self.coverage_percent:.2f}%, MAE {mae} "
            f"({len(self.rows)} users, {len(self.excluded_users)} excluded from MAE)"
        )
