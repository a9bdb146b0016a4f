"""Number and table formatting shared by the CSV, JSON and table outputs."""

import csv
import io
from typing import List, Sequence

SIGNIFICANT_DIGITS = 12
SCIENTIFIC_BELOW = 1e-3

def format_number(value: float) -> str:
    """Format a value with 12 significant digits.

    Magnitudes below 1e-3 (zero included) use scientific notation.

    Args:
        value: Number to format

    Returns:
        str: Formatted number
    """
    value = float(value)
    if value != value:
        return "nan"
    if abs(value) < SCIENTIFIC_BELOW:
        return f"{value:.{SIGNIFICANT_DIGITS - 1}e}"
    return f"{value:.{SIGNIFICANT_DIGITS}g}"

def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, str)):
        return str(value)
    return format_number(value)

def rows_to_csv(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    """Render rows as CSV with a header line."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(headers))
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()

def rows_to_table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    """Render rows as a fixed-width text table."""
    cells: List[List[str]] = [[str(h) for h in headers]]
    cells.extend([format_cell(v) for v in row] for row in rows)
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for index, row in enumerate(cells):
        lines.append("  ".join(cell.rjust(width) for cell, width in zip(row, widths)))
        if index == 0:
            lines.append("  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"
