"""
Synthetic motor-imagery trials with a known class-conditional spectral contrast.

Every sample is white Gaussian noise of std `noise_std`. Trials of the contrast class
additionally carry a sinusoid at `contrast_hz` with amplitude `contrast_amplitude` and a
random phase on the first `contrast_channels` channels. Nothing else differs between classes.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List

import numpy as np

from mibench.core.exceptions import InvalidParameterError
from mibench.data.model import Label, ProtocolTiming, TrialRecording, TrialSet

logger = logging.getLogger("mibench")


@dataclass(frozen=True)
class SyntheticSpec:
    n_subjects: int = 20
    trials_per_class: int = 20
    channels: int = 8
    duration_s: float = 7.0
    sampling_rate_hz: float = 1000.0
    contrast_amplitude: float = 3.0
    noise_std: float = 1.0
    contrast_channels: int = 2
    contrast_hz: float = 10.0
    amplitude_jitter: float = 0.0
    contrast_label: str = "left"
    cue_s: float = 3.0
    task_s: float = 4.0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> SyntheticSpec:
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s * self.sampling_rate_hz))

    def validate(self) -> None:
        for name in ("n_subjects", "trials_per_class", "channels"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"Synthetic {name} must be positive, got {getattr(self, name)}")
        for name in ("duration_s", "sampling_rate_hz", "cue_s", "task_s"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"Synthetic {name} must be positive, got {getattr(self, name)}")
        if self.noise_std < 0 or self.contrast_amplitude < 0 or self.amplitude_jitter < 0:
            raise InvalidParameterError("Synthetic noise_std, contrast_amplitude and amplitude_jitter must be >= 0")
        if not 0 <= self.contrast_channels <= self.channels:
            raise InvalidParameterError(
                f"contrast_channels must lie in [0, {self.channels}], got {self.contrast_channels}"
            )
        if self.cue_s + self.task_s > self.duration_s:
            raise InvalidParameterError(
                f"Task window ends at {self.cue_s + self.task_s}s but trials last {self.duration_s}s"
            )
        if self.n_samples < 2:
            raise InvalidParameterError("Synthetic trials need at least two samples")
        Label.parse(self.contrast_label)

    def protocol(self) -> ProtocolTiming:
        return ProtocolTiming(
            cue_s=self.cue_s,
            task_s=self.task_s,
            window_start_s=0.0,
            window_end_s=self.duration_s,
        )


def channel_names(count: int) -> List[str]:
    return [f"CH{i + 1:02d}" for i in range(count)]


def generate_synthetic(spec: SyntheticSpec, seed: int) -> TrialSet:
    """
    Build a balanced TrialSet. Identical (spec, seed) pairs give bit-identical output.
    """
    spec.validate()
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    contrast_label = Label.parse(spec.contrast_label)
    names = tuple(channel_names(spec.channels))
    t = np.arange(spec.n_samples) / spec.sampling_rate_hz

    trials: List[TrialRecording] = []
    for subject_no in range(spec.n_subjects):
        subject_id = f"S{subject_no + 1:02d}"
        labels = np.array([Label.RIGHT] * spec.trials_per_class + [Label.LEFT] * spec.trials_per_class)
        labels = labels[rng.permutation(labels.size)]
        for trial_index, label in enumerate(labels):
            samples = spec.noise_std * rng.standard_normal((spec.channels, spec.n_samples))
            phases = rng.uniform(0.0, 2.0 * np.pi, size=spec.contrast_channels)
            jitter = rng.standard_normal()
            if Label(label) == contrast_label and spec.contrast_channels:
                amplitude = spec.contrast_amplitude * max(0.0, 1.0 + spec.amplitude_jitter * jitter)
                carrier = np.sin(2.0 * np.pi * spec.contrast_hz * t[None, :] + phases[:, None])
                samples[:spec.contrast_channels] += amplitude * carrier
            trials.append(TrialRecording(
                subject_id=subject_id,
                trial_index=trial_index,
                label=Label(label),
                sampling_rate_hz=spec.sampling_rate_hz,
                channel_names=names,
                samples=samples,
            ))

    logger.info(
        f"Generated {len(trials)} synthetic trials ({spec.n_subjects} subjects, seed {seed}, "
        f"contrast {spec.contrast_amplitude} on {spec.contrast_channels} channel(s))"
    )
    return TrialSet(tuple(trials), spec.protocol())
