import logging
from typing import Any

from mibench.core.config import RunConfig
from mibench.data.synthetic import generate_synthetic
from mibench.data.trial_io import write_trial_set
from mibench.ui.ui import PrintType, terminal_print

logger = logging.getLogger("mibench")


def handle_synth(config: RunConfig, args: Any) -> int:
    """Generate the synthetic corpus described by the synth.* keys into the output directory."""
    spec = config.synthetic_spec()
    trial_set = generate_synthetic(spec, config.eval.master_seed)
    manifest_path = write_trial_set(trial_set, config.output.dir)
    terminal_print(
        f"Wrote {len(trial_set)} synthetic trials ({spec.n_subjects} subjects, {spec.channels} channels)",
        PrintType.SUCCESS,
    )
    terminal_print(manifest_path, PrintType.INFO)
    return 0
