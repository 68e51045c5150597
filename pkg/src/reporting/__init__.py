"""Result files: report.json, curve CSVs and the text summary."""

from .report_io import (
    REPORT_FILE,
    SUMMARY_FILE,
    curve_file_name,
    emit_report,
    parse_report,
    summary_tables,
    write_summary,
)

__all__ = [
    'REPORT_FILE',
    'SUMMARY_FILE',
    'curve_file_name',
    'emit_report',
    'parse_report',
    'summary_tables',
    'write_summary',
]
