"""
Reductions over finished cells: per-size winners, across-subject means and accuracy spread.
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from mibench.evaluation.protocol import SS, AccuracySummary


@dataclass(frozen=True)
class Winner:
    design: str
    subject: str
    n: int
    algorithm: str
    mean: float


@dataclass(frozen=True)
class SubjectAggregate:
    """Mean and sample std over subjects of the per-subject mean accuracy, for one (algorithm, n)."""
    algorithm: str
    n: int
    mean: float
    std: float
    subjects: int


@dataclass(frozen=True)
class DistributionStats:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float


def winners(summaries: Sequence[AccuracySummary]) -> List[Winner]:
    """
    Highest-mean algorithm per (design, subject, n), in first-appearance order.
    Failed cells never win; tied means go to the alphabetically first algorithm.
    Groups where every cell failed produce no row.
    """
    groups: Dict[Tuple[str, str, int], List[AccuracySummary]] = {}
    for summary in summaries:
        key = (summary.cell.design, summary.cell.subject, summary.cell.n)
        groups.setdefault(key, []).append(summary)

    rows = []
    for (design, subject, n), members in groups.items():
        candidates = [s for s in members if not s.failed and s.accuracies]
        if not candidates:
            continue
        best = min(candidates, key=lambda s: (-s.mean, s.cell.algorithm))
        rows.append(Winner(design, subject, n, best.cell.algorithm, best.mean))
    return rows


def aggregate_subjects(summaries: Sequence[AccuracySummary]) -> List[SubjectAggregate]:
    """Across-subject rows for the SS design; failed cells are left out."""
    groups: Dict[Tuple[str, int], List[float]] = {}
    for summary in summaries:
        if summary.cell.design != SS:
            continue
        means = groups.setdefault((summary.cell.algorithm, summary.cell.n), [])
        if not summary.failed and summary.accuracies:
            means.append(summary.mean)

    rows = []
    for (algorithm, n), means in groups.items():
        mean = float(np.mean(means)) if means else float("nan")
        std = float(np.std(means, ddof=1)) if len(means) >= 2 else 0.0
        rows.append(SubjectAggregate(algorithm, n, mean, std, len(means)))
    return rows


def distribution_stats(summary: AccuracySummary) -> DistributionStats:
    """Five-number summary with linearly interpolated quartiles; NaN when no repetition succeeded."""
    if not summary.accuracies:
        nan = float("nan")
        return DistributionStats(nan, nan, nan, nan, nan)
    q = np.percentile(np.asarray(summary.accuracies), [0, 25, 50, 75, 100])
    return DistributionStats(*(float(v) for v in q))
