import csv
import json
import logging
from typing import Dict, List, Mapping, Optional, Sequence

from grembed.errors import ZeroRatedUserError
from grembed.evaluation.metrics import coverage, mae
from grembed.evaluation.types import EvalReport, UserRow
from grembed.ingest.types import BusinessId, UserId
from grembed.recommend.types import GroundTruth, Recommendations
from grembed.utils import ensure_parent, format_real

RankedLists = Mapping[UserId, Sequence[BusinessId]]


def ranked_lists(recs: Recommendations) -> Dict[UserId, List[BusinessId]]:
    """Drops the vote weights, keeping the ranking."""
    return {user: r.item_ids for user, r in recs.items()}


def evaluate_method(
    recs: RankedLists,
    truth: GroundTruth,
    k: int,
    method: str = "",
    users: Optional[Sequence[UserId]] = None,
) -> EvalReport:
    """Scores the top-``k`` prefix of every user's list against their ground truth.

    Users without a list count as empty lists: they score no hit for coverage and are excluded
    from MAE, reported in ``excluded_users``.

    Args:
        recs (RankedLists): Ranked restaurant ids per user.
        truth (GroundTruth): Held-out high-rated sets.
        k (int): Recommendation count, ``>= 1``.
        method (str): Tag stored in the report.
        users (Optional[Sequence[UserId]]): Users to score; defaults to every user with a list.

    Raises:
        ZeroRatedUserError: If a scored user has an empty ground truth.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")

    rows: List[UserRow] = []
    for user in users if users is not None else sorted(recs):
        items = list(recs.get(user, ()))[:k]
        actual = truth.of(user)
        if not actual:
            raise ZeroRatedUserError(f"User '{user}' has no ground-truth item to evaluate against")
        rows.append(UserRow(user=user, n_r=len(items), n_hit=len(set(items) & actual), n_u=len(actual)))
    if not rows:
        raise ValueError(f"No user to evaluate for '{method}'")

    excluded = [row.user for row in rows if row.n_r == 0]
    scored = [(row.n_r, row.n_hit) for row in rows if row.n_r > 0]
    if excluded:
        logging.info("%s @ k=%d: %d users without recommendations excluded from MAE", method, k, len(excluded))

    return EvalReport(
        method=method,
        k=k,
        coverage_percent=coverage([(row.n_hit, row.n_u) for row in rows]),
        mae=mae(scored) if scored else None,
        rows=rows,
        excluded_users=excluded,
    )


def sweep_recommendation_count(
    recs: RankedLists,
    truth: GroundTruth,
    k_values: Sequence[int],
    method: str = "",
    users: Optional[Sequence[UserId]] = None,
) -> List[EvalReport]:
    return [evaluate_method(recs, truth, k, method, users) for k in k_values]


def save_sweep_csv(path: str, reports: Sequence[EvalReport]) -> None:
    """Writes ``method,k,coverage_percent,mae``; an undefined MAE is left empty."""
    ensure_parent(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "k", "coverage_percent", "mae"])
        for report in reports:
            mae_value = "" if report.mae is None else format_real(report.mae)
            writer.writerow([report.method, report.k, format_real(report.coverage_percent), mae_value])


def save_reports(path: str, reports: Sequence[EvalReport]) -> None:
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([r.to_dict() for r in reports], fh, indent=1, sort_keys=True)
        fh.write("\n")


def comparison_table(reports: Sequence[EvalReport], k_values: Optional[Sequence[int]] = None) -> str:
    """Renders methods against ``k`` with coverage and MAE columns, one row per method in first-seen order."""
    ks = sorted(set(k_values or [r.k for r in reports]))
    methods: List[str] = []
    cells: Dict[tuple, EvalReport] = {}
    for report in reports:
        if report.method not in methods:
            methods.append(report.method)
        cells[(report.method, report.k)] = report

    header = ["Method"] + [col for k in ks for col in (f"Coverage@{k} (%)", f"MAE@{k}")]
    body = []
    for method in methods:
        row = [method]
        for k in ks:
            report = cells.get((method, k))
            if report is None:
                row += ["-", "-"]
            else:
                row += [f"{report.coverage_percent:.2f}", "-" if report.mae is None else f"{report.mae:.4f}"]
        body.append(row)

    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]

    def fmt(row: List[str]) -> str:
        return "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))

    rule = "-" * len(fmt(header))
    return "\n".join([fmt(header), rule] + [fmt(r) for r in body]) + "\n"
