import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from mibench import __version__
from mibench.commands import handle_ingest_check, handle_run_si, handle_run_ss, handle_synth
from mibench.core.config import RunConfig, parse_config
from mibench.core.exceptions import ConfigError, MibenchError
from mibench.logger import setup_logger
from mibench.ui.ui import PrintType, terminal_print

logger = logging.getLogger("mibench")

COMMANDS: Dict[str, Callable] = {
    "run-ss": handle_run_ss,
    "run-si": handle_run_si,
    "synth": handle_synth,
    "ingest-check": handle_ingest_check,
}

EXIT_OK = 0
EXIT_USAGE = 1


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mibench",
        description="Motor-imagery EEG classification benchmark: sample-size sweeps for LDA, SVM, CART and kNN",
    )
    parser.add_argument("--version", action="version", version=f"mibench {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="<command>")
    help_text = {
        "run-ss": "Subject-specific sweep over eval.ss_sizes",
        "run-si": "Subject-independent sweep over eval.si_sizes",
        "synth": "Write a synthetic corpus and manifest",
        "ingest-check": "Validate a corpus against the configuration",
    }
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=help_text[name])
        sub.add_argument("--config", required=True, help="Path to a key = value config file")
        sub.add_argument("--out", help="Output directory (overrides output.dir)")
        sub.add_argument("--seed", type=_seed, help="Master seed (overrides eval.master_seed)")
    return parser


def apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    try:
        if args.out:
            config.output.dir = args.out
        if args.seed is not None:
            config.eval.master_seed = args.seed
    except ValidationError as e:
        raise ConfigError(f"Invalid command-line override: {e.errors()[0]['msg']}") from e
    return config


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    try:
        config = apply_overrides(parse_config(args.config), args)
        setup_logger(config.output.dir)
        logger.info(f"mibench {__version__}: {args.command} --config {args.config}")
        return COMMANDS[args.command](config, args)
    except MibenchError as e:
        logger.error(f"{type(e).__name__}: {e}")
        terminal_print(str(e), PrintType.ERROR)
        return e.exit_code
    except KeyboardInterrupt:
        terminal_print("\nInterrupted", PrintType.WARNING)
        return 130


def run_cli():
    """Entry point for console script"""
    sys.exit(main())


if __name__ == "__main__":
    run_cli()
