"""
Reading and writing the binary trial interchange format and its CSV manifest.

Trial file layout (little-endian):
    magic "MIEEG1" (6 bytes), version u16 = 1, n_channels u32, n_samples u32,
    sampling_rate_hz f64, n_channels null-terminated UTF-8 names, then
    n_channels * n_samples float32 samples, channel-major.

Manifest: UTF-8 CSV with header subject_id,trial_index,label,file; file paths are
relative to the manifest's directory.
"""

import logging
import os
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from mibench.core.exceptions import DataError, ManifestError, TrialFormatError
from mibench.data.model import Label, ProtocolTiming, TrialRecording, TrialSet

logger = logging.getLogger("mibench")

TRIAL_MAGIC = b"MIEEG1"
TRIAL_FORMAT_VERSION = 1
TRIAL_FILE_SUFFIX = ".mieeg"
MANIFEST_COLUMNS = ["subject_id", "trial_index", "label", "file"]

HEADER_DTYPE = np.dtype([
    ("magic", "S6"),
    ("version", "<u2"),
    ("n_channels", "<u4"),
    ("n_samples", "<u4"),
    ("sampling_rate_hz", "<f8"),
])
SAMPLE_DTYPE = np.dtype("<f4")


def encode_trial(channel_names: List[str], samples: np.ndarray, sampling_rate_hz: float) -> bytes:
    """Serialize one trial matrix to interchange bytes."""
    samples = np.asarray(samples)
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header["magic"] = TRIAL_MAGIC
    header["version"] = TRIAL_FORMAT_VERSION
    header["n_channels"] = samples.shape[0]
    header["n_samples"] = samples.shape[1]
    header["sampling_rate_hz"] = sampling_rate_hz
    names = b"".join(name.encode("utf-8") + b"\x00" for name in channel_names)
    body = np.ascontiguousarray(samples, dtype=SAMPLE_DTYPE).tobytes(order="C")
    return header.tobytes() + names + body


def decode_trial(payload: bytes, source: str = "<bytes>") -> Tuple[List[str], np.ndarray, float]:
    """
    Parse interchange bytes into (channel_names, samples, sampling_rate_hz).

    Raises:
        TrialFormatError: bad magic, unsupported version, truncated or oversized payload
    """
    if len(payload) < HEADER_DTYPE.itemsize:
        raise TrialFormatError(f"{source}: file shorter than the {HEADER_DTYPE.itemsize}-byte header")
    header = np.frombuffer(payload, dtype=HEADER_DTYPE, count=1)[0]
    if bytes(header["magic"]) != TRIAL_MAGIC:
        raise TrialFormatError(f"{source}: bad magic bytes {payload[:6]!r}, expected {TRIAL_MAGIC!r}")
    if int(header["version"]) != TRIAL_FORMAT_VERSION:
        raise TrialFormatError(f"{source}: unsupported format version {int(header['version'])}")

    n_channels = int(header["n_channels"])
    n_samples = int(header["n_samples"])
    sampling_rate_hz = float(header["sampling_rate_hz"])
    if not np.isfinite(sampling_rate_hz) or sampling_rate_hz <= 0:
        raise TrialFormatError(f"{source}: invalid sampling rate {sampling_rate_hz}")

    offset = HEADER_DTYPE.itemsize
    channel_names: List[str] = []
    for _ in range(n_channels):
        end = payload.find(b"\x00", offset)
        if end < 0:
            raise TrialFormatError(f"{source}: unterminated channel name")
        try:
            channel_names.append(payload[offset:end].decode("utf-8"))
        except UnicodeDecodeError as e:
            raise TrialFormatError(f"{source}: channel name is not UTF-8 ({e})") from e
        offset = end + 1

    expected = n_channels * n_samples * SAMPLE_DTYPE.itemsize
    remaining = len(payload) - offset
    if remaining != expected:
        raise TrialFormatError(
            f"{source}: sample block holds {remaining} bytes, header declares "
            f"{n_channels} x {n_samples} float32 ({expected} bytes)"
        )
    samples = np.frombuffer(payload, dtype=SAMPLE_DTYPE, offset=offset).reshape(n_channels, n_samples)
    return channel_names, samples.astype(np.float64), sampling_rate_hz


def read_trial_file(path: str) -> Tuple[List[str], np.ndarray, float]:
    if not os.path.isfile(path):
        raise ManifestError(f"Trial file not found: {path}")
    with open(path, "rb") as f:
        return decode_trial(f.read(), source=path)


def write_trial_file(path: str, trial: TrialRecording) -> None:
    with open(path, "wb") as f:
        f.write(encode_trial(list(trial.channel_names), trial.samples, trial.sampling_rate_hz))


def _read_manifest(manifest_path: str) -> pd.DataFrame:
    if not os.path.isfile(manifest_path):
        raise ManifestError(f"Manifest not found: {manifest_path}")
    try:
        frame = pd.read_csv(manifest_path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ManifestError(f"Malformed manifest {manifest_path}: {e}") from e

    columns = [str(c).strip() for c in frame.columns]
    if columns != MANIFEST_COLUMNS:
        raise ManifestError(
            f"Malformed manifest header in {manifest_path}: {','.join(columns)} "
            f"(expected {','.join(MANIFEST_COLUMNS)})"
        )
    frame.columns = columns
    return frame


def load_trial_set(manifest_path: str, protocol: Optional[ProtocolTiming] = None) -> TrialSet:
    """
    Load every trial listed in a manifest, preserving manifest order.

    Raises:
        ManifestError: missing manifest/trial file, bad header row, unknown label
        TrialFormatError: a trial file violating the binary format
        DataError: trials disagreeing on channels or sampling rate
    """
    protocol = protocol or ProtocolTiming()
    frame = _read_manifest(manifest_path)
    base_dir = os.path.dirname(os.path.abspath(manifest_path))

    trials: List[TrialRecording] = []
    for row_no, row in enumerate(frame.itertuples(index=False), start=2):
        try:
            trial_index = int(row.trial_index)
        except ValueError as e:
            raise ManifestError(f"{manifest_path} row {row_no}: trial_index {row.trial_index!r} is not an integer") from e
        label = Label.parse(row.label)
        trial_path = os.path.join(base_dir, row.file)
        channel_names, samples, sampling_rate_hz = read_trial_file(trial_path)
        try:
            trials.append(TrialRecording(
                subject_id=str(row.subject_id),
                trial_index=trial_index,
                label=label,
                sampling_rate_hz=sampling_rate_hz,
                channel_names=tuple(channel_names),
                samples=samples,
            ))
        except DataError as e:
            raise ManifestError(f"{manifest_path} row {row_no}: {e}") from e

    trial_set = TrialSet(tuple(trials), protocol)
    logger.info(
        f"Loaded {len(trial_set)} trials for {len(trial_set.subjects)} subjects "
        f"({len(trial_set.channel_names)} channels) from {manifest_path}"
    )
    return trial_set


def trial_file_name(trial: TrialRecording) -> str:
    return f"{trial.subject_id}_{trial.trial_index:04d}{TRIAL_FILE_SUFFIX}"


def write_trial_set(trial_set: TrialSet, directory: str, manifest_name: str = "manifest.csv") -> str:
    """
    Write every trial plus a manifest into `directory`. Returns the manifest path.
    """
    os.makedirs(directory, exist_ok=True)
    rows = []
    for trial in trial_set.trials:
        file_name = trial_file_name(trial)
        write_trial_file(os.path.join(directory, file_name), trial)
        rows.append({
            "subject_id": trial.subject_id,
            "trial_index": trial.trial_index,
            "label": trial.label.to_manifest(),
            "file": file_name,
        })

    manifest_path = os.path.join(directory, manifest_name)
    pd.DataFrame(rows, columns=MANIFEST_COLUMNS).to_csv(
        manifest_path, index=False, encoding="utf-8", lineterminator="\n"
    )
    logger.info(f"Wrote {len(rows)} trial files and manifest {manifest_path}")
    return manifest_path
