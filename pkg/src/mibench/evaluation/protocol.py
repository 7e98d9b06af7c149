"""
Hold-out evaluation: stratified 50/50 split, stratified training subsample, test-half accuracy,
repeated per cell and swept over subjects, algorithms and training sizes.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from mibench.classifiers import ClassifierSettings, LabeledSet, accuracy_percent, train_model
from mibench.core.config import RunConfig, SelectionMode
from mibench.core.exceptions import (
    CellFailedError,
    DimensionMismatchError,
    InvalidParameterError,
    SelectionError,
    TrainingError,
)
from mibench.evaluation.seeding import derive_seed, split_seed, stream
from mibench.features.extraction import FeatureTable
from mibench.features.selection import FeatureMask, select_from_matrix

logger = logging.getLogger("mibench")

SS = "SS"
SI = "SI"

SeedLike = Union[int, np.random.Generator]


@dataclass(frozen=True)
class ExperimentCell:
    design: str
    algorithm: str
    n: int
    repetitions: int = 100
    master_seed: int = 0
    subject_id: Optional[str] = None

    def __post_init__(self):
        if self.design not in (SS, SI):
            raise InvalidParameterError(f"Design must be SS or SI, got {self.design!r}")
        if self.design == SS and not self.subject_id:
            raise InvalidParameterError("SS cells need a subject id")
        if self.repetitions < 1:
            raise InvalidParameterError(f"Repetitions must be positive, got {self.repetitions}")
        if self.n < 2:
            raise InvalidParameterError(f"Training size n must be >= 2, got {self.n}")

    @property
    def subject(self) -> str:
        """Subject column value: the subject id for SS, "-" for SI."""
        return self.subject_id if self.design == SS else "-"

    def seed(self, rep: int) -> int:
        return derive_seed(self.master_seed, self.design, self.subject_id, self.algorithm, self.n, rep)


@dataclass(frozen=True)
class RepFailure:
    rep: int
    reason: str


@dataclass(frozen=True)
class AccuracySummary:
    """
    Per-repetition accuracies of one cell. Failed repetitions are listed in `failures` and
    left out of `accuracies`, `mean` and `std`.
    """
    cell: ExperimentCell
    accuracies: Tuple[float, ...] = ()
    failures: Tuple[RepFailure, ...] = ()
    selected_counts: Tuple[int, ...] = ()
    mode: str = SelectionMode.CLEAN.value
    p_threshold: float = 0.0
    dimension: int = 0
    failed: bool = False

    @property
    def mean(self) -> float:
        return float(np.mean(self.accuracies)) if self.accuracies else float("nan")

    @property
    def std(self) -> float:
        """Sample standard deviation (n - 1 denominator); 0.0 with fewer than two accuracies."""
        if len(self.accuracies) < 2:
            return 0.0
        return float(np.std(self.accuracies, ddof=1))

    @property
    def n_failures(self) -> int:
        return len(self.failures)


@dataclass(frozen=True)
class EvaluationSettings:
    """Everything run_cell needs besides the data, resolved for one design."""
    classifiers: ClassifierSettings = field(default_factory=ClassifierSettings)
    mode: SelectionMode = SelectionMode.CLEAN
    p_threshold: float = 0.05
    fixed_split: bool = False
    max_failure_fraction: float = 0.1

    @classmethod
    def from_config(cls, config: RunConfig, design: str) -> EvaluationSettings:
        return cls(
            classifiers=config.classifier_settings(design),
            mode=config.selection_mode,
            p_threshold=config.p_threshold(design),
            fixed_split=config.eval.fixed_split,
            max_failure_fraction=config.eval.max_failure_fraction,
        )


def split_half(data: LabeledSet, seed: SeedLike) -> Tuple[LabeledSet, LabeledSet]:
    """
    Stratified 50/50 split. Each class is shuffled and its first ceil(count / 2) rows go to
    training. Row order inside each half follows the input order.

    Raises:
        InvalidParameterError: fewer than two rows
    """
    if len(data) < 2:
        raise InvalidParameterError(f"Cannot split {len(data)} row(s) into train and test halves")
    rng = stream(seed) if isinstance(seed, int) else seed
    train_rows: List[int] = []
    for label in (0, 1):
        rows = data.class_indices(label)
        shuffled = rows[rng.permutation(rows.size)]
        train_rows.extend(shuffled[: (rows.size + 1) // 2].tolist())
    train_mask = np.zeros(len(data), dtype=bool)
    train_mask[train_rows] = True
    return data.subset(np.flatnonzero(train_mask)), data.subset(np.flatnonzero(~train_mask))


def subsample(train: LabeledSet, n: int, seed: SeedLike) -> LabeledSet:
    """
    Draw floor(n/2) rows per class uniformly without replacement. For odd n the last row is
    drawn uniformly from the rows left over in either class. Rows keep their input order.

    Raises:
        InvalidParameterError: n < 2, n larger than the set, or floor(n/2) above a class count
    """
    if n < 2:
        raise InvalidParameterError(f"Subsample size must be >= 2, got {n}")
    per_class = n // 2
    if per_class > min(train.n0, train.n1) or n > len(train):
        raise InvalidParameterError(
            f"Subsample of {n} needs {per_class} rows per class, have n0={train.n0}, n1={train.n1}"
        )
    rng = stream(seed) if isinstance(seed, int) else seed
    picked: List[int] = []
    for label in (0, 1):
        rows = train.class_indices(label)
        picked.extend(rng.choice(rows, size=per_class, replace=False).tolist())
    if n % 2:
        leftover = np.setdiff1d(np.arange(len(train)), picked)
        picked.append(int(rng.choice(leftover)))
    return train.subset(sorted(picked))


def run_cell(
    data: LabeledSet,
    cell: ExperimentCell,
    settings: EvaluationSettings,
    mask: Optional[FeatureMask] = None,
) -> AccuracySummary:
    """
    Run every repetition of one cell.

    In clean mode the t-test runs on each repetition's training half (before subsampling).
    In faithful mode `mask` was chosen once on all of `data` and is applied as-is; with mode
    "off" (or faithful without a mask) every feature is kept.

    Raises:
        CellFailedError: more than max_failure_fraction of the repetitions failed
    """
    if settings.mode == SelectionMode.FAITHFUL and mask is not None and mask.source_dimension != data.dimension:
        raise DimensionMismatchError("Faithful-mode mask does not match the data dimensionality")

    accuracies: List[float] = []
    failures: List[RepFailure] = []
    selected: List[int] = []
    fixed_split_seed = split_seed(cell.master_seed, cell.design, cell.subject_id)

    for rep in range(cell.repetitions):
        rng = stream(cell.seed(rep))
        train, test = split_half(data, fixed_split_seed if settings.fixed_split else rng)
        try:
            if settings.mode == SelectionMode.CLEAN:
                rep_mask = select_from_matrix(train.features, train.labels, settings.p_threshold)
            elif mask is not None:
                rep_mask = mask
            else:
                rep_mask = FeatureMask.identity(data.dimension)
            sample = subsample(train, cell.n, rng).masked(rep_mask)
            model = train_model(cell.algorithm, sample, settings.classifiers)
            accuracies.append(accuracy_percent(model, test.masked(rep_mask)))
            selected.append(rep_mask.n_selected)
        except (TrainingError, SelectionError) as e:
            logger.warning(f"{cell.design} {cell.subject} {cell.algorithm} n={cell.n} rep {rep} failed: {e}")
            failures.append(RepFailure(rep, str(e)))

    summary = AccuracySummary(
        cell=cell,
        accuracies=tuple(accuracies),
        failures=tuple(failures),
        selected_counts=tuple(selected),
        mode=SelectionMode(settings.mode).value,
        p_threshold=settings.p_threshold if settings.mode != SelectionMode.OFF else 1.0,
        dimension=data.dimension,
    )
    if len(failures) > settings.max_failure_fraction * cell.repetitions:
        summary = replace(summary, failed=True)
        raise CellFailedError(
            f"{cell.design} {cell.subject} {cell.algorithm} n={cell.n}: "
            f"{len(failures)} of {cell.repetitions} repetitions failed",
            summary=summary,
        )
    return summary


def labeled_scope(table: FeatureTable, rows: Sequence[int]) -> LabeledSet:
    rows = np.asarray(rows, dtype=np.int64)
    return LabeledSet(
        features=table.features[rows].reshape(rows.size, table.dimension),
        labels=table.labels[rows],
        trial_ids=tuple(table.trial_ids[i] for i in rows),
        feature_names=table.feature_names,
    )


def design_scopes(table: FeatureTable, design: str) -> List[Tuple[Optional[str], LabeledSet]]:
    """(subject id, data) per scope: one per subject in first-appearance order for SS, one pooled for SI."""
    if design == SI:
        return [(None, labeled_scope(table, np.arange(len(table.labels))))]
    subjects = list(dict.fromkeys(table.subject_ids))
    return [(subject, labeled_scope(table, table.rows_for_subject(subject))) for subject in subjects]


def check_sizes(scope: LabeledSet, sizes: Sequence[int], subject: Optional[str]) -> None:
    """Every size must fit in the training half, with floor(n/2) rows from each class."""
    half0, half1 = (scope.n0 + 1) // 2, (scope.n1 + 1) // 2
    available = min(half0, half1)
    for n in sizes:
        if n // 2 > available or n > half0 + half1:
            where = f"subject {subject}" if subject else "the pooled data"
            raise InvalidParameterError(
                f"Training size {n} needs {n // 2} trials per class in the training half; "
                f"{where} has {available}"
            )


def _failed_scope(cells: Sequence[ExperimentCell], settings: EvaluationSettings, dimension: int,
                  reason: str) -> List[AccuracySummary]:
    return [
        AccuracySummary(
            cell=cell,
            failures=tuple(RepFailure(rep, reason) for rep in range(cell.repetitions)),
            mode=settings.mode.value,
            p_threshold=settings.p_threshold,
            dimension=dimension,
            failed=True,
        )
        for cell in cells
    ]


def _run_or_mark(data: LabeledSet, cell: ExperimentCell, settings: EvaluationSettings,
                 mask: Optional[FeatureMask]) -> AccuracySummary:
    try:
        summary = run_cell(data, cell, settings, mask)
    except CellFailedError as e:
        logger.error(str(e))
        return e.summary
    logger.info(
        f"{cell.design} {cell.subject} {cell.algorithm} n={cell.n}: mean {summary.mean:.2f} "
        f"std {summary.std:.2f} ({summary.n_failures} failed)"
    )
    return summary


def run_design(
    table: FeatureTable,
    design: str,
    algorithms: Sequence[str],
    sizes: Sequence[int],
    settings: EvaluationSettings,
    repetitions: int = 100,
    master_seed: int = 0,
    threads: int = 1,
) -> List[AccuracySummary]:
    """
    Every (subject for SS) x algorithm x size cell, in that nesting order. Cells run on a thread
    pool and land in their pre-assigned slot, so the output is independent of `threads`.
    Cells that fail come back with `failed = True` instead of raising.
    """
    slots: List[Optional[AccuracySummary]] = []
    jobs: List[Tuple[int, LabeledSet, ExperimentCell, Optional[FeatureMask]]] = []

    for subject, scope in design_scopes(table, design):
        check_sizes(scope, sizes, subject)
        cells = [
            ExperimentCell(design, str(algorithm), int(n), repetitions, master_seed, subject)
            for algorithm in algorithms
            for n in sizes
        ]
        mask = None
        if settings.mode == SelectionMode.FAITHFUL:
            try:
                mask = select_from_matrix(scope.features, scope.labels, settings.p_threshold)
                logger.info(f"{design} {subject or '-'}: faithful selection kept {mask.n_selected} features")
            except SelectionError as e:
                logger.error(f"{design} {subject or '-'}: feature selection failed: {e}")
                slots.extend(_failed_scope(cells, settings, scope.dimension, str(e)))
                continue
        for cell in cells:
            jobs.append((len(slots), scope, cell, mask))
            slots.append(None)

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        futures = [(slot, pool.submit(_run_or_mark, scope, cell, settings, mask)) for slot, scope, cell, mask in jobs]
        for slot, future in futures:
            slots[slot] = future.result()

    summaries: List[AccuracySummary] = list(slots)
    logger.info(f"{design} design finished: {len(summaries)} cells, {sum(s.failed for s in summaries)} failed")
    return summaries
