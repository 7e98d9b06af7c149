from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from mibench.core.exceptions import InvalidParameterError, TrialCoverageError, WindowUnderflowError
from mibench.data.model import Label, ProtocolTiming, TrialRecording


@dataclass(frozen=True)
class Epoch:
    """A cropped (and later band-passed) trial segment, channels x time."""
    label: Label
    subject_id: str
    sampling_rate_hz: float
    samples: np.ndarray = field(repr=False)
    channel_names: tuple = ()
    trial_index: int = -1

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64, copy=True)
        if samples.ndim != 2:
            raise InvalidParameterError("Epoch samples must be a 2-D matrix")
        if not np.all(np.isfinite(samples)):
            raise InvalidParameterError(f"Epoch {self.subject_id}:{self.trial_index} contains non-finite values")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "label", Label(self.label))
        object.__setattr__(self, "channel_names", tuple(self.channel_names))

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    def with_samples(self, samples: np.ndarray) -> Epoch:
        return Epoch(self.label, self.subject_id, self.sampling_rate_hz, samples, self.channel_names, self.trial_index)


def extract_mi_segment(
    trial: TrialRecording,
    drop_head_s: float,
    drop_tail_s: float,
    protocol: Optional[ProtocolTiming] = None,
) -> Epoch:
    """
    Crop the task window to [task_start + drop_head_s, task_end - drop_tail_s).

    Times are relative to cue onset; the stored samples start at protocol.window_start_s.

    The width is rounded once, so every epoch has round((task_s - drop_head_s - drop_tail_s) * fs)
    columns whatever the sampling rate.

    Raises:
        WindowUnderflowError: drops consume the whole task window
        TrialCoverageError: the segment lies outside the stored samples
    """
    protocol = protocol or ProtocolTiming()
    if drop_head_s < 0 or drop_tail_s < 0:
        raise InvalidParameterError("Segment drops must be non-negative")
    if drop_head_s + drop_tail_s >= protocol.task_s:
        raise WindowUnderflowError(
            f"Dropping {drop_head_s}s + {drop_tail_s}s leaves nothing of the {protocol.task_s}s task window"
        )

    fs = trial.sampling_rate_hz
    start = int(round((protocol.task_start_s + drop_head_s - protocol.window_start_s) * fs))
    stop = start + int(round((protocol.task_s - drop_head_s - drop_tail_s) * fs))
    if start < 0 or stop > trial.n_samples:
        raise TrialCoverageError(
            f"Trial {trial.trial_id}: segment [{start}, {stop}) exceeds the {trial.n_samples} stored samples"
        )

    return Epoch(
        label=trial.label,
        subject_id=trial.subject_id,
        sampling_rate_hz=fs,
        samples=trial.samples[:, start:stop],
        channel_names=trial.channel_names,
        trial_index=trial.trial_index,
    )
