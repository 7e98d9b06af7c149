"""
Trial data types, the binary interchange format and the synthetic generator.
"""

from mibench.data.model import Label, ProtocolTiming, TrialRecording, TrialSet, select_channels
from mibench.data.synthetic import SyntheticSpec, generate_synthetic
from mibench.data.trial_io import load_trial_set, write_trial_set

__all__ = [
    "Label",
    "ProtocolTiming",
    "TrialRecording",
    "TrialSet",
    "SyntheticSpec",
    "generate_synthetic",
    "load_trial_set",
    "select_channels",
    "write_trial_set",
]
