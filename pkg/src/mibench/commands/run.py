"""
run-ss / run-si: feature extraction, the Monte-Carlo sweep and the report files.
"""

import logging
from typing import Any, List

from mibench.core.config import RunConfig, resolve_threads
from mibench.core.exceptions import ConfigError
from mibench.data.model import TrialSet, select_channels
from mibench.data.trial_io import load_trial_set
from mibench.evaluation.protocol import SI, SS, EvaluationSettings, run_design
from mibench.features.extraction import build_feature_table
from mibench.report.writer import render_summary_text, write_report
from mibench.ui.ui import PrintType, terminal_print

logger = logging.getLogger("mibench")


def load_configured_trials(config: RunConfig) -> TrialSet:
    """
    Load the manifest named by data.manifest and keep the configured channels.

    Raises:
        ConfigError: data.manifest is not set
        DataError: unreadable manifest or trials, unknown channel names
    """
    if not config.data.manifest:
        raise ConfigError("data.manifest is not set", key="data.manifest")
    trial_set = load_trial_set(config.data.manifest, config.protocol_timing())
    if config.data.channels:
        return select_channels(trial_set, config.data.channels)
    logger.warning(f"data.channels is empty; keeping all {len(trial_set.channel_names)} channels")
    return trial_set


def run_design_command(config: RunConfig, args: Any, design: str) -> int:
    command = getattr(args, "command", f"run-{design.lower()}")
    trial_set = load_configured_trials(config)
    terminal_print(
        f"Loaded {len(trial_set)} trials from {len(trial_set.subjects)} subject(s)", PrintType.INFO
    )

    terminal_print("Extracting features...", PrintType.PROCESSING)
    table = build_feature_table(trial_set, config.pipeline_settings())

    settings = EvaluationSettings.from_config(config, design)
    sizes: List[int] = config.eval.ss_sizes if design == SS else config.eval.si_sizes
    algorithms = [a.value for a in config.eval.algorithms]
    threads = resolve_threads()
    terminal_print(
        f"Running {design}: {len(algorithms)} algorithm(s) x {len(sizes)} size(s), "
        f"{config.eval.reps} repetitions, selection {settings.mode.value}, {threads} thread(s)",
        PrintType.PROCESSING,
    )
    summaries = run_design(
        table,
        design,
        algorithms,
        sizes,
        settings,
        repetitions=config.eval.reps,
        master_seed=config.eval.master_seed,
        threads=threads,
    )

    written = write_report(config.output.dir, command, design, summaries, config.to_lines())
    terminal_print(render_summary_text(design, summaries), PrintType.INFO)
    for path in written:
        terminal_print(f"  {path}", PrintType.INFO)

    failed = [s for s in summaries if s.failed]
    if failed:
        terminal_print(f"{len(failed)} cell(s) failed; see {config.output.dir}", PrintType.ERROR)
        return 3
    terminal_print(f"{design} run complete", PrintType.SUCCESS)
    return 0


def handle_run_ss(config: RunConfig, args: Any) -> int:
    """Subject-specific design: one scope per subject."""
    return run_design_command(config, args, SS)


def handle_run_si(config: RunConfig, args: Any) -> int:
    """Subject-independent design: all subjects pooled."""
    return run_design_command(config, args, SI)
