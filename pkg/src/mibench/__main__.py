"""
Main entry point for the mibench package.

Running `python -m mibench` behaves exactly like the `mibench` console script.
"""

from mibench.cli import run_cli


def main():
    """Runs the mibench command line."""
    run_cli()


if __name__ == "__main__":
    main()
