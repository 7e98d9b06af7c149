"""
CSV and text reports for design runs.
"""

from mibench.report.writer import render_summary_text, write_csv_atomic, write_report, write_text_atomic

__all__ = ["render_summary_text", "write_csv_atomic", "write_report", "write_text_atomic"]
