"""
Butterworth band-pass design and zero-phase application.

Design path: analog Butterworth low-pass prototype -> low-pass to band-pass transform at
pre-warped edges -> bilinear transform -> second-order sections. The magnitude response at
both cut-offs is exactly 1/sqrt(2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import signal

from mibench.core.exceptions import FilterDesignError, SamplingRateMismatchError
from mibench.preprocess.segment import Epoch

logger = logging.getLogger("mibench")

Section = Tuple[float, float, float, float, float]


@dataclass(frozen=True)
class FilterSpec:
    """
    Designed band-pass filter. `order` is the band-pass order (twice the prototype order);
    each section is (b0, b1, b2, a1, a2) with a0 = 1.
    """
    order: int
    low_cut_hz: float
    high_cut_hz: float
    sections: Tuple[Section, ...]
    sampling_rate_hz: float

    @property
    def sos(self) -> np.ndarray:
        """Sections in scipy's (n_sections, 6) layout."""
        return np.array([[b0, b1, b2, 1.0, a1, a2] for b0, b1, b2, a1, a2 in self.sections], dtype=np.float64)

    @property
    def edge_padding(self) -> int:
        """Odd-extension length used at each end by apply_bandpass."""
        return 3 * self.order

    def pole_magnitudes(self) -> np.ndarray:
        return np.concatenate([np.abs(np.roots([1.0, a1, a2])) for _, _, _, a1, a2 in self.sections])

    def is_stable(self) -> bool:
        return bool(np.all(self.pole_magnitudes() < 1.0))


def design_butterworth(order: int, low_hz: float, high_hz: float, fs: float) -> FilterSpec:
    """
    Design a digital Butterworth band-pass from a prototype of the given order.

    Raises:
        FilterDesignError: order < 1, or the band is not 0 < low_hz < high_hz < fs/2
    """
    if int(order) != order or order < 1:
        raise FilterDesignError(f"Filter order must be a positive integer, got {order}")
    if fs <= 0:
        raise FilterDesignError(f"Sampling rate must be positive, got {fs}")
    if not 0 < low_hz < high_hz < fs / 2:
        raise FilterDesignError(
            f"Band edges must satisfy 0 < low ({low_hz}) < high ({high_hz}) < fs/2 ({fs / 2})"
        )

    zeros, poles, gain = signal.buttap(int(order))
    warped_low = 2.0 * fs * np.tan(np.pi * low_hz / fs)
    warped_high = 2.0 * fs * np.tan(np.pi * high_hz / fs)
    zeros, poles, gain = signal.lp2bp_zpk(
        zeros, poles, gain, wo=np.sqrt(warped_low * warped_high), bw=warped_high - warped_low
    )
    zeros, poles, gain = signal.bilinear_zpk(zeros, poles, gain, fs=fs)
    sos = signal.zpk2sos(zeros, poles, gain)

    sections = tuple(
        (float(b0 / a0), float(b1 / a0), float(b2 / a0), float(a1 / a0), float(a2 / a0))
        for b0, b1, b2, a0, a1, a2 in sos
    )
    spec = FilterSpec(
        order=2 * int(order),
        low_cut_hz=float(low_hz),
        high_cut_hz=float(high_hz),
        sections=sections,
        sampling_rate_hz=float(fs),
    )
    if not spec.is_stable():
        raise FilterDesignError(f"Designed filter is unstable (max pole radius {spec.pole_magnitudes().max()})")
    logger.info(f"Designed order-{spec.order} Butterworth band-pass {low_hz}-{high_hz} Hz at {fs} Hz")
    return spec


def frequency_response(spec: FilterSpec, freqs_hz: Sequence[float]) -> np.ndarray:
    """Complex response H(e^{jw}) of the cascade, evaluated directly on the unit circle."""
    z_inv = np.exp(-2j * np.pi * np.asarray(freqs_hz, dtype=np.float64) / spec.sampling_rate_hz)
    response = np.ones_like(z_inv, dtype=np.complex128)
    for b0, b1, b2, a1, a2 in spec.sections:
        response *= (b0 + b1 * z_inv + b2 * z_inv ** 2) / (1.0 + a1 * z_inv + a2 * z_inv ** 2)
    return response


def filter_matrix(samples: np.ndarray, spec: FilterSpec, zero_phase: bool = True) -> np.ndarray:
    """Filter each row of a channels x time matrix independently."""
    samples = np.asarray(samples, dtype=np.float64)
    if zero_phase:
        padlen = min(spec.edge_padding, samples.shape[-1] - 1)
        return signal.sosfiltfilt(spec.sos, samples, axis=-1, padtype="odd", padlen=padlen)

    zi = signal.sosfilt_zi(spec.sos)
    # (n_sections, channels, 2) initial state scaled by each channel's first sample
    initial = zi[:, None, :] * samples[None, :, :1]
    filtered, _ = signal.sosfilt(spec.sos, samples, axis=-1, zi=initial)
    return filtered


def apply_bandpass(epoch: Epoch, filt: FilterSpec, zero_phase: bool = True) -> Epoch:
    """
    Band-pass every channel of an epoch. Zero-phase (forward-backward) by default.

    Raises:
        SamplingRateMismatchError: the epoch and the filter disagree on sampling rate
    """
    if not np.isclose(epoch.sampling_rate_hz, filt.sampling_rate_hz, rtol=0.0, atol=1e-9):
        raise SamplingRateMismatchError(
            f"Epoch sampled at {epoch.sampling_rate_hz} Hz, filter designed for {filt.sampling_rate_hz} Hz"
        )
    return epoch.with_samples(filter_matrix(epoch.samples, filt, zero_phase=zero_phase))
