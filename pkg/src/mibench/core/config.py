"""
Run configuration: a line-based `section.key = value` file validated against pydantic models.
"""

import logging
import os
import re
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from mibench.classifiers import ClassifierSettings
from mibench.core.exceptions import ConfigError
from mibench.data.model import ProtocolTiming
from mibench.data.synthetic import SyntheticSpec
from mibench.features.extraction import PipelineSettings
from mibench.features.spectral import PoolingConfig

logger = logging.getLogger("mibench")

THREADS_ENV_VAR = "MIBENCH_THREADS"

_INT_RE = re.compile(r"^[+-]?\d+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


class Algorithm(str, Enum):
    CART = "CART"
    KNN = "KNN"
    LDA = "LDA"
    SVM = "SVM"


class SelectionMode(str, Enum):
    FAITHFUL = "faithful"
    CLEAN = "clean"
    OFF = "off"


class _Section(BaseModel):
    class Config:
        """Pydantic model configuration."""

        extra = "forbid"
        validate_assignment = True


class DataSection(_Section):
    manifest: Optional[str] = Field(default=None, description="Manifest CSV, relative to the config file")
    channels: List[str] = Field(default_factory=list, description="Channels to keep; empty keeps all")

    @field_validator("channels", mode="before")
    @classmethod
    def _names_as_text(cls, value: Any) -> Any:
        if isinstance(value, list):
            return [str(v) for v in value]
        return value


class ProtocolSection(_Section):
    cue_s: float = 3.0
    task_s: float = 4.0
    rest_s: float = 6.0
    window_start_s: float = 0.0
    window_end_s: float = 7.0


class SegmentSection(_Section):
    drop_head_s: float = Field(default=1.0, ge=0)
    drop_tail_s: float = Field(default=0.5, ge=0)


class FilterSection(_Section):
    order: int = Field(default=4, ge=1)
    low_hz: float = Field(default=3.0, gt=0)
    high_hz: float = Field(default=35.0, gt=0)
    zero_phase: bool = True


class FeatureSection(_Section):
    window_bins: int = Field(default=10, ge=1)
    band_low_hz: float = Field(default=3.0, ge=0)
    band_high_hz: float = Field(default=35.0, gt=0)


class SelectSection(_Section):
    p_threshold_ss: float = Field(default=0.05, gt=0, le=1)
    p_threshold_si: float = Field(default=0.005, gt=0, le=1)
    mode: Optional[SelectionMode] = None


class LdaSection(_Section):
    shrinkage_ss: float = Field(default=0.1, ge=0, le=1)
    shrinkage_si: float = Field(default=0.01, ge=0, le=1)


class SvmSection(_Section):
    c: float = Field(default=1.0, gt=0)
    kernel: Literal["linear", "rbf"] = "rbf"
    sigma: Union[Literal["median"], float] = "median"
    tol: float = Field(default=1e-3, gt=0)
    max_passes: int = Field(default=10_000, ge=1)

    @field_validator("sigma")
    @classmethod
    def _positive_sigma(cls, value: Union[str, float]) -> Union[str, float]:
        if not isinstance(value, str) and value <= 0:
            raise ValueError("sigma must be 'median' or a positive number")
        return value


class CartSection(_Section):
    min_leaf: int = Field(default=3, ge=1)


class KnnSection(_Section):
    k: int = Field(default=3, ge=1)

    @field_validator("k")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("k must be odd")
        return value


class EvalSection(_Section):
    reps: int = Field(default=100, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2 ** 64)
    ss_sizes: List[int] = Field(default_factory=lambda: [10, 15, 20])
    si_sizes: List[int] = Field(default_factory=lambda: [100, 150, 200, 250, 300, 350, 400])
    fixed_split: bool = False
    reproduce: bool = False
    algorithms: List[Algorithm] = Field(
        default_factory=lambda: [Algorithm.LDA, Algorithm.SVM, Algorithm.CART, Algorithm.KNN]
    )
    max_failure_fraction: float = Field(default=0.1, ge=0, le=1)

    @field_validator("algorithms", mode="before")
    @classmethod
    def _upper(cls, value: Any) -> Any:
        if isinstance(value, list):
            return [str(v).upper() for v in value]
        return value

    @field_validator("ss_sizes", "si_sizes")
    @classmethod
    def _sizes_at_least_two(cls, value: List[int]) -> List[int]:
        for n in value:
            if n < 2:
                raise ValueError(f"training sizes must be >= 2, got {n}")
        return value


class SynthSection(_Section):
    n_subjects: int = Field(default=20, ge=1)
    trials_per_class: int = Field(default=20, ge=1)
    channels: int = Field(default=8, ge=1)
    duration_s: float = Field(default=7.0, gt=0)
    sampling_rate_hz: float = Field(default=1000.0, gt=0)
    contrast_amplitude: float = Field(default=3.0, ge=0)
    noise_std: float = Field(default=1.0, ge=0)
    contrast_channels: int = Field(default=2, ge=0)
    contrast_hz: float = Field(default=10.0, gt=0)
    amplitude_jitter: float = Field(default=0.0, ge=0)


class OutputSection(_Section):
    dir: str = "mibench-out"


class RunConfig(_Section):
    data: DataSection = Field(default_factory=DataSection)
    protocol: ProtocolSection = Field(default_factory=ProtocolSection)
    segment: SegmentSection = Field(default_factory=SegmentSection)
    filter: FilterSection = Field(default_factory=FilterSection)
    feature: FeatureSection = Field(default_factory=FeatureSection)
    select: SelectSection = Field(default_factory=SelectSection)
    lda: LdaSection = Field(default_factory=LdaSection)
    svm: SvmSection = Field(default_factory=SvmSection)
    cart: CartSection = Field(default_factory=CartSection)
    knn: KnnSection = Field(default_factory=KnnSection)
    eval: EvalSection = Field(default_factory=EvalSection)
    synth: SynthSection = Field(default_factory=SynthSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @property
    def selection_mode(self) -> SelectionMode:
        """Explicit select.mode wins; otherwise faithful when reproducing, clean when not."""
        if self.select.mode is not None:
            return self.select.mode
        return SelectionMode.FAITHFUL if self.eval.reproduce else SelectionMode.CLEAN

    def protocol_timing(self) -> ProtocolTiming:
        return ProtocolTiming(**self.protocol.model_dump())

    def pipeline_settings(self) -> PipelineSettings:
        return PipelineSettings(
            drop_head_s=self.segment.drop_head_s,
            drop_tail_s=self.segment.drop_tail_s,
            filter_order=self.filter.order,
            low_hz=self.filter.low_hz,
            high_hz=self.filter.high_hz,
            zero_phase=self.filter.zero_phase,
            pooling=PoolingConfig(
                band_low_hz=self.feature.band_low_hz,
                band_high_hz=self.feature.band_high_hz,
                window_bins=self.feature.window_bins,
            ),
        )

    def classifier_settings(self, design: str) -> ClassifierSettings:
        """Hyper-parameters for `design` ("SS" or "SI"); only LDA shrinkage differs between the two."""
        shrinkage = self.lda.shrinkage_ss if design == "SS" else self.lda.shrinkage_si
        return ClassifierSettings(
            lda_shrinkage=shrinkage,
            svm_c=self.svm.c,
            svm_kernel=self.svm.kernel,
            svm_sigma=self.svm.sigma,
            svm_tol=self.svm.tol,
            svm_max_passes=self.svm.max_passes,
            cart_min_leaf=self.cart.min_leaf,
            knn_k=self.knn.k,
        )

    def p_threshold(self, design: str) -> float:
        return self.select.p_threshold_ss if design == "SS" else self.select.p_threshold_si

    def synthetic_spec(self) -> SyntheticSpec:
        return SyntheticSpec.from_dict({
            **self.synth.model_dump(),
            "cue_s": self.protocol.cue_s,
            "task_s": self.protocol.task_s,
        })

    def to_lines(self) -> List[str]:
        """Effective configuration as `key = value` lines, in section order."""
        lines = []
        for section_name in type(self).model_fields:
            section = getattr(self, section_name)
            for key in type(section).model_fields:
                lines.append(f"{section_name}.{key} = {format_value(getattr(section, key))}")
        return lines


def format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    return str(value)


def parse_value(text: str) -> Any:
    """Literal for one config value: int, float, bool, none, [list] or bare string."""
    text = text.strip()
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if lowered == "none":
        return None
    if _INT_RE.match(text):
        return int(text)
    if _FLOAT_RE.match(text):
        return float(text)
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        if not inner:
            return []
        return [parse_value(item) for item in inner.split(",")]
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_config_text(text: str) -> Tuple[Dict[str, Dict[str, Any]], Dict[Tuple[str, str], int]]:
    """
    Split config text into {section: {key: value}} plus the line number that set each key.
    Later assignments override earlier ones.
    """
    values: Dict[str, Dict[str, Any]] = {}
    lines: Dict[Tuple[str, str], int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line_no=line_no)
        key, value = (part.strip() for part in line.split("=", 1))
        parts = key.split(".")
        if len(parts) != 2 or not all(parts):
            raise ConfigError(f"key {key!r} is not of the form section.name", line_no=line_no, key=key)
        section, name = parts
        if section not in RunConfig.model_fields:
            raise ConfigError(f"unknown section {section!r}", line_no=line_no, key=key)
        values.setdefault(section, {})[name] = parse_value(value)
        lines[(section, name)] = line_no
    return values, lines


def build_config(values: Dict[str, Dict[str, Any]], lines: Dict[Tuple[str, str], int]) -> RunConfig:
    """
    Validate each section against its model.

    Raises:
        ConfigError: unknown key or invalid value, naming the line that set it
    """
    sections = {}
    for section, fields in values.items():
        model = RunConfig.model_fields[section].annotation
        try:
            sections[section] = model.model_validate(fields)
        except ValidationError as validation_err:
            error = validation_err.errors()[0]
            name = str(error["loc"][0]) if error["loc"] else ""
            key = f"{section}.{name}"
            reason = "unknown key" if error["type"] == "extra_forbidden" else error["msg"]
            raise ConfigError(f"{key}: {reason}", line_no=lines.get((section, name)), key=key) from validation_err
    return RunConfig(**sections)


def parse_config(path: str) -> RunConfig:
    """
    Load a config file. A relative data.manifest is resolved against the config file's directory.

    Raises:
        ConfigError: unreadable file, malformed line, unknown key or type error
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except (UnicodeDecodeError, OSError) as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e

    values, lines = parse_config_text(text)
    config = build_config(values, lines)

    manifest = config.data.manifest
    if manifest and not os.path.isabs(manifest):
        config.data.manifest = os.path.normpath(os.path.join(os.path.dirname(os.path.abspath(path)), manifest))
    logger.info(f"Loaded config {path} ({len(lines)} key(s) set)")
    return config


def resolve_threads() -> int:
    """Worker count from MIBENCH_THREADS (a .env file in the working directory is honoured); 0 or unset means all CPUs."""
    load_dotenv()
    raw = os.getenv(THREADS_ENV_VAR, "").strip()
    try:
        requested = int(raw) if raw else 0
    except ValueError as e:
        raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from e
    if requested < 0:
        raise ConfigError(f"{THREADS_ENV_VAR} must be >= 0, got {requested}")
    return requested or (os.cpu_count() or 1)
