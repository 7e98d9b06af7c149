"""
ingest-check: validate a corpus against the configuration without running any evaluation.
"""

import logging
from typing import Any, Dict, List

from mibench.commands.run import load_configured_trials
from mibench.core.config import RunConfig
from mibench.data.model import Label, TrialSet
from mibench.features.extraction import trial_feature_vectors
from mibench.ui.ui import PrintType, print_table, terminal_print

logger = logging.getLogger("mibench")


def ingest_report(trial_set: TrialSet, config: RunConfig) -> Dict[str, Any]:
    """
    Counts and shapes implied by the configuration. The feature dimension comes from running
    the full pipeline on the first trial.
    """
    settings = config.pipeline_settings()
    timing = trial_set.protocol
    epoch_s = timing.task_s - settings.drop_head_s - settings.drop_tail_s
    dimension = 0
    if len(trial_set):
        first = next(trial_feature_vectors(TrialSet(trial_set.trials[:1], timing), settings))
        dimension = first.dimension

    counts = trial_set.class_counts()
    smallest = min((min(c.values()) for c in counts.values()), default=0)
    warnings: List[str] = []
    for subject, by_label in counts.items():
        half = (min(by_label.values()) + 1) // 2
        too_big = [n for n in config.eval.ss_sizes if n // 2 > half]
        if too_big:
            warnings.append(f"subject {subject}: SS size(s) {too_big} exceed the training half")
    pooled_half = min((sum(c[label] for c in counts.values()) + 1) // 2 for label in Label)
    too_big = [n for n in config.eval.si_sizes if n // 2 > pooled_half]
    if too_big:
        warnings.append(f"SI size(s) {too_big} exceed the pooled training half")

    return {
        "trials": len(trial_set),
        "subjects": len(trial_set.subjects),
        "channels": len(trial_set.channel_names),
        "sampling_rate_hz": trial_set.sampling_rate_hz,
        "epoch_s": epoch_s,
        "epoch_samples": int(round(epoch_s * trial_set.sampling_rate_hz)),
        "feature_dimension": dimension,
        "smallest_class_count": smallest,
        "counts": counts,
        "warnings": warnings,
    }


def handle_ingest_check(config: RunConfig, args: Any) -> int:
    trial_set = load_configured_trials(config)
    report = ingest_report(trial_set, config)

    rows = [
        (subject, by_label[Label.RIGHT], by_label[Label.LEFT])
        for subject, by_label in report["counts"].items()
    ]
    print_table(rows, ("subject", "right", "left"))
    terminal_print(
        f"{report['trials']} trials, {report['subjects']} subject(s), {report['channels']} channels "
        f"at {report['sampling_rate_hz']:g} Hz",
        PrintType.INFO,
    )
    terminal_print(
        f"Epoch {report['epoch_s']:g} s ({report['epoch_samples']} samples), "
        f"{report['feature_dimension']} features per trial",
        PrintType.INFO,
    )
    for warning in report["warnings"]:
        logger.warning(warning)
        terminal_print(warning, PrintType.WARNING)
    terminal_print("Corpus OK", PrintType.SUCCESS)
    return 0
