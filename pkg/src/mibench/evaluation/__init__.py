"""
Monte-Carlo hold-out evaluation and its aggregates.
"""

from mibench.evaluation.aggregate import (
    DistributionStats,
    SubjectAggregate,
    Winner,
    aggregate_subjects,
    distribution_stats,
    winners,
)
from mibench.evaluation.protocol import (
    SI,
    SS,
    AccuracySummary,
    EvaluationSettings,
    ExperimentCell,
    RepFailure,
    run_cell,
    run_design,
    split_half,
    subsample,
)
from mibench.evaluation.seeding import derive_seed

__all__ = [
    "SI",
    "SS",
    "AccuracySummary",
    "DistributionStats",
    "EvaluationSettings",
    "ExperimentCell",
    "RepFailure",
    "SubjectAggregate",
    "Winner",
    "aggregate_subjects",
    "derive_seed",
    "distribution_stats",
    "run_cell",
    "run_design",
    "split_half",
    "subsample",
    "winners",
]
