"""
Segment extraction and Butterworth band-pass filtering.
"""

from mibench.preprocess.butterworth import FilterSpec, apply_bandpass, design_butterworth, frequency_response
from mibench.preprocess.segment import Epoch, extract_mi_segment

__all__ = [
    "Epoch",
    "FilterSpec",
    "apply_bandpass",
    "design_butterworth",
    "extract_mi_segment",
    "frequency_response",
]
