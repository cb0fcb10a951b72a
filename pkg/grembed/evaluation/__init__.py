from .metrics import coverage, mae
from .report import (
    RankedLists,
    comparison_table,
    evaluate_method,
    ranked_lists,
    save_reports,
    save_sweep_csv,
    sweep_recommendation_count,
)
from .types import EvalReport, UserRow


__all__ = [
    "EvalReport",
    "RankedLists",
    "UserRow",
    "comparison_table",
    "coverage",
    "evaluate_method",
    "mae",
    "ranked_lists",
    "save_reports",
    "save_sweep_csv",
    "sweep_recommendation_count",
]
