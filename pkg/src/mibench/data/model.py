"""
Trial and label data types shared by every stage of the pipeline.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Sequence, Tuple

import numpy as np

from mibench.core.exceptions import ChannelLookupError, DataError, InvalidParameterError, ManifestError

logger = logging.getLogger("mibench")


class Label(IntEnum):
    """Motor-imagery class. Right hand is class 0, left hand is class 1."""
    RIGHT = 0
    LEFT = 1

    @classmethod
    def parse(cls, text: str) -> Label:
        """Parse a manifest label ("left"/"right", any case)."""
        normalized = str(text).strip().lower()
        if normalized == "left":
            return cls.LEFT
        if normalized == "right":
            return cls.RIGHT
        raise ManifestError(f"Unknown label string: {text!r} (expected 'left' or 'right')")

    def to_manifest(self) -> str:
        return self.name.lower()


def _frozen_array(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ProtocolTiming:
    """
    Trial timing relative to cue onset. The stored samples of every trial cover
    [window_start_s, window_end_s); the imagery task runs from cue_s to cue_s + task_s.
    """
    cue_s: float = 3.0
    task_s: float = 4.0
    rest_s: float = 6.0
    window_start_s: float = 0.0
    window_end_s: float = 7.0

    def __post_init__(self):
        for name in ("cue_s", "task_s", "rest_s"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"Protocol duration {name} must be positive, got {getattr(self, name)}")
        if self.window_end_s <= self.window_start_s:
            raise InvalidParameterError("Stored trial window must have positive length")

    @property
    def task_start_s(self) -> float:
        return self.cue_s

    @property
    def task_end_s(self) -> float:
        return self.cue_s + self.task_s

    @property
    def window_s(self) -> float:
        return self.window_end_s - self.window_start_s


@dataclass(frozen=True)
class TrialRecording:
    """One labeled multi-channel trial. `samples` is channels x time and read-only."""
    subject_id: str
    trial_index: int
    label: Label
    sampling_rate_hz: float
    channel_names: Tuple[str, ...]
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "channel_names", tuple(self.channel_names))
        object.__setattr__(self, "label", Label(self.label))
        samples = _frozen_array(self.samples)
        if samples.ndim != 2:
            raise DataError(f"Trial {self.subject_id}/{self.trial_index}: samples must be a 2-D matrix")
        if samples.shape[0] != len(self.channel_names):
            raise DataError(
                f"Trial {self.subject_id}/{self.trial_index}: {samples.shape[0]} rows "
                f"but {len(self.channel_names)} channel names"
            )
        if self.sampling_rate_hz <= 0:
            raise DataError(f"Trial {self.subject_id}/{self.trial_index}: sampling rate must be positive")
        if self.trial_index < 0:
            raise DataError(f"Trial index must be non-negative, got {self.trial_index}")
        object.__setattr__(self, "samples", samples)

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def trial_id(self) -> str:
        return f"{self.subject_id}:{self.trial_index}"


@dataclass(frozen=True)
class TrialSet:
    """An ordered collection of trials sharing channels and sampling rate."""
    trials: Tuple[TrialRecording, ...]
    protocol: ProtocolTiming = field(default_factory=ProtocolTiming)

    def __post_init__(self):
        object.__setattr__(self, "trials", tuple(self.trials))
        if not self.trials:
            return
        first = self.trials[0]
        seen: Dict[str, set] = {}
        for trial in self.trials:
            if trial.sampling_rate_hz != first.sampling_rate_hz:
                raise DataError(
                    f"Trial {trial.trial_id} has sampling rate {trial.sampling_rate_hz}, "
                    f"expected {first.sampling_rate_hz}"
                )
            if trial.channel_names != first.channel_names:
                raise DataError(f"Trial {trial.trial_id} has a different channel list")
            indices = seen.setdefault(trial.subject_id, set())
            if trial.trial_index in indices:
                raise DataError(f"Duplicate trial index {trial.trial_index} for subject {trial.subject_id}")
            indices.add(trial.trial_index)

    def __len__(self) -> int:
        return len(self.trials)

    def __iter__(self):
        return iter(self.trials)

    @property
    def channel_names(self) -> Tuple[str, ...]:
        return self.trials[0].channel_names if self.trials else ()

    @property
    def sampling_rate_hz(self) -> float:
        return self.trials[0].sampling_rate_hz if self.trials else 0.0

    @property
    def subjects(self) -> List[str]:
        """Subject ids in order of first appearance."""
        return list(dict.fromkeys(trial.subject_id for trial in self.trials))

    @property
    def labels(self) -> np.ndarray:
        return np.array([int(trial.label) for trial in self.trials], dtype=np.int64)

    def for_subject(self, subject_id: str) -> TrialSet:
        return TrialSet(tuple(t for t in self.trials if t.subject_id == subject_id), self.protocol)

    def class_counts(self) -> Dict[str, Dict[Label, int]]:
        counts: Dict[str, Dict[Label, int]] = {}
        for trial in self.trials:
            per_subject = counts.setdefault(trial.subject_id, {Label.RIGHT: 0, Label.LEFT: 0})
            per_subject[trial.label] += 1
        return counts


def select_channels(trial_set: TrialSet, keep: Sequence[str]) -> TrialSet:
    """
    Restrict every trial to the channels in `keep`, in `keep` order.

    Raises:
        ChannelLookupError: naming every requested channel absent from the set
    """
    keep = list(keep)
    available = {name: row for row, name in enumerate(trial_set.channel_names)}
    missing = [name for name in keep if name not in available]
    if missing:
        raise ChannelLookupError(missing)

    rows = [available[name] for name in keep]
    trials = tuple(
        TrialRecording(
            subject_id=trial.subject_id,
            trial_index=trial.trial_index,
            label=trial.label,
            sampling_rate_hz=trial.sampling_rate_hz,
            channel_names=tuple(keep),
            samples=trial.samples[rows, :],
        )
        for trial in trial_set.trials
    )
    logger.info(f"Selected {len(keep)} of {len(trial_set.channel_names)} channels")
    return TrialSet(trials, trial_set.protocol)
