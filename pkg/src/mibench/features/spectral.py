"""
Periodogram features: per-channel PSD estimate, max-pooling over bin windows, and
concatenation across channels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from mibench.core.exceptions import EmptyBandError, InvalidParameterError
from mibench.data.model import Label
from mibench.preprocess.segment import Epoch


@dataclass(frozen=True)
class SpectrumEstimate:
    """
    One-sided storage of the periodogram of a real signal: bins k = 0..N//2 at k * bin_hz.
    Values are the two-sided periodogram evaluated at those bins (not doubled).
    """
    values: np.ndarray = field(repr=False)
    bin_hz: float
    n_samples: int

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.values.size) * self.bin_hz

    def two_sided(self) -> np.ndarray:
        """All N bins, rebuilt from the conjugate symmetry of a real signal's DFT."""
        n = self.n_samples
        mirrored = self.values[1:(n + 1) // 2][::-1]
        return np.concatenate([self.values, mirrored])


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray = field(repr=False)
    label: Label
    feature_names: Tuple[str, ...]

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).ravel()
        if values.size != len(self.feature_names):
            raise InvalidParameterError(
                f"{values.size} feature values but {len(self.feature_names)} feature names"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("Feature vector contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "label", Label(self.label))

    @property
    def dimension(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class PoolingConfig:
    band_low_hz: float = 3.0
    band_high_hz: float = 35.0
    window_bins: int = 10


def periodogram(x: Sequence[float], fs: float) -> SpectrumEstimate:
    """
    S_k = (dt / T) * |sum_n x[n] exp(-i w_k n dt)|^2 at w_k = 2 pi k / (N dt), k = 0..N//2.

    Rectangular window, no detrending, no zero padding.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise InvalidParameterError(f"Periodogram needs a 1-D signal of at least 2 samples, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidParameterError("Periodogram input contains non-finite values")
    if fs <= 0:
        raise InvalidParameterError(f"Sampling rate must be positive, got {fs}")

    n = x.size
    # dt / T = 1 / N
    values = np.abs(np.fft.rfft(x)) ** 2 / n
    values.setflags(write=False)
    return SpectrumEstimate(values=values, bin_hz=fs / n, n_samples=n)


def band_bins(spec: SpectrumEstimate, band_low_hz: float, band_high_hz: float) -> np.ndarray:
    """Indices of the bins whose frequency lies in [band_low_hz, band_high_hz]."""
    freqs = spec.frequencies
    guard = 1e-9 * spec.bin_hz
    return np.flatnonzero((freqs >= band_low_hz - guard) & (freqs <= band_high_hz + guard))


def pool_max(spec: SpectrumEstimate, band_low_hz: float, band_high_hz: float, window_bins: int) -> np.ndarray:
    """
    Maximum of each complete run of `window_bins` consecutive in-band bins; a trailing
    incomplete run is dropped.

    Raises:
        InvalidParameterError: window_bins < 1 or band limits outside [0, fs/2]
        EmptyBandError: the band selects no bins
    """
    if int(window_bins) != window_bins or window_bins < 1:
        raise InvalidParameterError(f"window_bins must be a positive integer, got {window_bins}")
    nyquist = spec.bin_hz * spec.n_samples / 2
    if band_low_hz < 0 or band_high_hz > nyquist or band_low_hz > band_high_hz:
        raise InvalidParameterError(f"Band [{band_low_hz}, {band_high_hz}] Hz is outside [0, {nyquist}] Hz")

    bins = band_bins(spec, band_low_hz, band_high_hz)
    if bins.size == 0:
        raise EmptyBandError(f"Band [{band_low_hz}, {band_high_hz}] Hz selects no bins at {spec.bin_hz} Hz/bin")

    n_windows = bins.size // int(window_bins)
    in_band = spec.values[bins[:n_windows * int(window_bins)]]
    return in_band.reshape(n_windows, int(window_bins)).max(axis=1)


def pooled_feature_names(channel: str, spec: SpectrumEstimate, pooling: PoolingConfig) -> List[str]:
    bins = band_bins(spec, pooling.band_low_hz, pooling.band_high_hz)
    w = int(pooling.window_bins)
    return [f"{channel}:{bins[i * w]}-{bins[i * w + w - 1]}" for i in range(bins.size // w)]


def assemble_features(epoch: Epoch, pooling: PoolingConfig) -> FeatureVector:
    """Periodogram -> pool_max per channel, concatenated in epoch channel order."""
    channel_names = epoch.channel_names or tuple(f"CH{i + 1:02d}" for i in range(epoch.samples.shape[0]))
    blocks: List[np.ndarray] = []
    names: List[str] = []
    for channel, row in zip(channel_names, epoch.samples):
        spec = periodogram(row, epoch.sampling_rate_hz)
        blocks.append(pool_max(spec, pooling.band_low_hz, pooling.band_high_hz, pooling.window_bins))
        names.extend(pooled_feature_names(channel, spec, pooling))
    values = np.concatenate(blocks) if blocks else np.zeros(0)
    return FeatureVector(values=values, label=epoch.label, feature_names=tuple(names))
