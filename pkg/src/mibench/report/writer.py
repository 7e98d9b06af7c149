"""
Report files for a finished design run.

CSV files keep full float precision and `\\n` line endings; every file is written to a temporary
file in the output directory first and then moved into place.
"""

import logging
import os
import shutil
import tempfile
from typing import Dict, List, Sequence

import pandas as pd

from mibench import __version__
from mibench.data.trial_io import TRIAL_FORMAT_VERSION
from mibench.evaluation.aggregate import aggregate_subjects, distribution_stats, winners
from mibench.evaluation.protocol import SI, SS, AccuracySummary

logger = logging.getLogger("mibench")

REPORT_FORMAT_VERSION = 1

SUMMARY_FILE = "summary.csv"
WINNERS_FILE = "winners.csv"
ACCURACIES_FILE = "accuracies.csv"
AGGREGATES_FILE = "subject_aggregates.csv"
DISTRIBUTION_FILE = "distribution.csv"
SELECTION_FILE = "selection.csv"
META_FILE = "run-meta.txt"
TEXT_FILE = "summary.txt"

SUMMARY_COLUMNS = ["design", "subject", "algorithm", "n", "mean", "std", "reps", "failures", "mode", "failed"]
WINNER_COLUMNS = ["design", "subject", "n", "algorithm", "mean"]
ACCURACY_COLUMNS = ["design", "subject", "algorithm", "n", "rep", "accuracy"]
AGGREGATE_COLUMNS = ["algorithm", "n", "mean", "std", "subjects"]
DISTRIBUTION_COLUMNS = ["design", "subject", "algorithm", "n", "min", "q1", "median", "q3", "max"]
SELECTION_COLUMNS = [
    "design", "subject", "algorithm", "n", "mode", "threshold", "dimension",
    "mean_selected", "min_selected", "max_selected",
]


def write_text_atomic(path: str, text: str) -> None:
    """Write to a temp file in the target directory, then move it over `path`."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        shutil.move(temp_path, path)
    except Exception:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def write_csv_atomic(path: str, frame: pd.DataFrame) -> None:
    write_text_atomic(path, frame.to_csv(index=False, lineterminator="\n"))


def _cell_columns(summary: AccuracySummary) -> Dict[str, object]:
    cell = summary.cell
    return {"design": cell.design, "subject": cell.subject, "algorithm": cell.algorithm, "n": cell.n}


def summary_frame(summaries: Sequence[AccuracySummary]) -> pd.DataFrame:
    rows = [{
        **_cell_columns(s),
        "mean": s.mean,
        "std": s.std,
        "reps": s.cell.repetitions,
        "failures": s.n_failures,
        "mode": s.mode,
        "failed": "true" if s.failed else "false",
    } for s in summaries]
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def winners_frame(summaries: Sequence[AccuracySummary]) -> pd.DataFrame:
    rows = [w.__dict__ for w in winners(summaries)]
    return pd.DataFrame(rows, columns=WINNER_COLUMNS)


def accuracies_frame(summaries: Sequence[AccuracySummary]) -> pd.DataFrame:
    """One row per successful repetition, with its repetition index."""
    rows = []
    for s in summaries:
        failed_reps = {f.rep for f in s.failures}
        reps = [r for r in range(s.cell.repetitions) if r not in failed_reps]
        for rep, accuracy in zip(reps, s.accuracies):
            rows.append({**_cell_columns(s), "rep": rep, "accuracy": accuracy})
    return pd.DataFrame(rows, columns=ACCURACY_COLUMNS)


def aggregates_frame(summaries: Sequence[AccuracySummary]) -> pd.DataFrame:
    rows = [a.__dict__ for a in aggregate_subjects(summaries)]
    return pd.DataFrame(rows, columns=AGGREGATE_COLUMNS)


def distribution_frame(summaries: Sequence[AccuracySummary]) -> pd.DataFrame:
    rows = []
    for s in summaries:
        stats = distribution_stats(s)
        rows.append({
            **_cell_columns(s),
            "min": stats.minimum,
            "q1": stats.q1,
            "median": stats.median,
            "q3": stats.q3,
            "max": stats.maximum,
        })
    return pd.DataFrame(rows, columns=DISTRIBUTION_COLUMNS)


def selection_frame(summaries: Sequence[AccuracySummary]) -> pd.DataFrame:
    rows = []
    for s in summaries:
        counts = s.selected_counts
        rows.append({
            **_cell_columns(s),
            "mode": s.mode,
            "threshold": s.p_threshold,
            "dimension": s.dimension,
            "mean_selected": sum(counts) / len(counts) if counts else float("nan"),
            "min_selected": min(counts) if counts else "",
            "max_selected": max(counts) if counts else "",
        })
    return pd.DataFrame(rows, columns=SELECTION_COLUMNS)


def _fmt(value: float) -> str:
    return "-" if value != value else f"{value:.1f}"


def render_summary_text(design: str, summaries: Sequence[AccuracySummary]) -> str:
    """
    Human-readable tables rounded to one decimal. SS: one row per subject with a column per
    (algorithm, n) and the winner per n, then across-subject mean/std rows. SI: one row per n
    with "mean (std)" per algorithm and the winner.
    """
    best = {(w.subject, w.n): w.algorithm for w in winners(summaries)}
    algorithms = list(dict.fromkeys(s.cell.algorithm for s in summaries))
    sizes = list(dict.fromkeys(s.cell.n for s in summaries))
    lines: List[str] = [f"{design} design ({len(summaries)} cells, accuracies in percent)", ""]

    if design == SI:
        table = {}
        for s in summaries:
            text = "FAILED" if s.failed else f"{_fmt(s.mean)} ({_fmt(s.std)})"
            table.setdefault(s.cell.n, {})[s.cell.algorithm] = text
        frame = pd.DataFrame.from_dict(table, orient="index", columns=algorithms)
        frame["max"] = [best.get(("-", n), "-") for n in frame.index]
        frame.index.name = "n"
        lines.append(frame.to_string())
    else:
        table = {}
        for s in summaries:
            table.setdefault(s.cell.subject, {})[f"{s.cell.algorithm}@{s.cell.n}"] = \
                "FAILED" if s.failed else _fmt(s.mean)
        columns = [f"{a}@{n}" for a in algorithms for n in sizes]
        frame = pd.DataFrame.from_dict(table, orient="index", columns=columns)
        for n in sizes:
            frame[f"max@{n}"] = [best.get((subject, n), "-") for subject in frame.index]
        frame.index.name = "subject"
        lines.append(frame.to_string())

        aggregates = aggregate_subjects(summaries)
        if aggregates:
            agg = {"mean": {}, "std": {}}
            for a in aggregates:
                agg["mean"][f"{a.algorithm}@{a.n}"] = _fmt(a.mean)
                agg["std"][f"{a.algorithm}@{a.n}"] = _fmt(a.std)
            lines += ["", pd.DataFrame.from_dict(agg, orient="index", columns=columns).to_string()]

    failed = [s for s in summaries if s.failed]
    if failed:
        lines += ["", f"{len(failed)} cell(s) failed; they are excluded from the max columns."]
    return "\n".join(lines) + "\n"


def render_meta(command: str, design: str, summaries: Sequence[AccuracySummary], config_lines: Sequence[str]) -> str:
    """Run metadata. Contains no timestamps or host details, so identical runs give identical files."""
    modes = sorted({s.mode for s in summaries})
    lines = [
        f"mibench_version = {__version__}",
        f"report_format_version = {REPORT_FORMAT_VERSION}",
        f"trial_format_version = {TRIAL_FORMAT_VERSION}",
        f"command = {command}",
        f"design = {design}",
        f"cells = {len(summaries)}",
        f"failed_cells = {sum(s.failed for s in summaries)}",
        f"selection_mode = {', '.join(modes) if modes else '-'}",
        "std = sample (n - 1 denominator)",
        "",
        "[config]",
        *config_lines,
    ]
    return "\n".join(lines) + "\n"


def write_report(
    out_dir: str,
    command: str,
    design: str,
    summaries: Sequence[AccuracySummary],
    config_lines: Sequence[str],
) -> List[str]:
    """Write every report file for one design run. Returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    frames = {
        SUMMARY_FILE: summary_frame(summaries),
        WINNERS_FILE: winners_frame(summaries),
        ACCURACIES_FILE: accuracies_frame(summaries),
        DISTRIBUTION_FILE: distribution_frame(summaries),
        SELECTION_FILE: selection_frame(summaries),
    }
    if design == SS:
        frames[AGGREGATES_FILE] = aggregates_frame(summaries)

    written = []
    for name, frame in frames.items():
        path = os.path.join(out_dir, name)
        write_csv_atomic(path, frame)
        written.append(path)

    for name, text in (
        (META_FILE, render_meta(command, design, summaries, config_lines)),
        (TEXT_FILE, render_summary_text(design, summaries)),
    ):
        path = os.path.join(out_dir, name)
        write_text_atomic(path, text)
        written.append(path)

    logger.info(f"Wrote {len(written)} report files to {out_dir}")
    return written
