from mibench.commands.ingest_check import handle_ingest_check
from mibench.commands.run import handle_run_si, handle_run_ss
from mibench.commands.synth import handle_synth

__all__ = [
    "handle_ingest_check",
    "handle_run_si",
    "handle_run_ss",
    "handle_synth",
]
