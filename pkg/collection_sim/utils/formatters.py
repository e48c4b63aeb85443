"""
Formatting utilities for terminal output of experiment results.
"""

import math
from typing import Iterable, Optional, Union

from collection_sim.models.results import SummaryRow


def format_number(value: Optional[Union[float, int]], decimals: int = 0) -> str:
    """
    Format a number with thousands separators.

    Examples:
        >>> format_number(1234)
        '1,234'
        >>> format_number(1234.5678, decimals=2)
        '1,234.57'
        >>> format_number(float("inf"))
        'inf'
    """
    if value is None:
        return "-"

    try:
        float_value = float(value)
    except (ValueError, TypeError):
        return "-"
    if not math.isfinite(float_value):
        return str(float_value)
    if decimals == 0:
        return f"{round(float_value):,}"
    return f"{float_value:,.{decimals}f}"


def format_percentage(value: Optional[Union[float, int]], decimals: int = 1) -> str:
    """
    Format a ratio as a percentage.

    Examples:
        >>> format_percentage(0.455)
        '45.5%'
        >>> format_percentage(0.2, decimals=2)
        '20.00%'
    """
    if value is None:
        return "-"

    try:
        return f"{float(value) * 100:.{decimals}f}%"
    except (ValueError, TypeError):
        return "-"


def format_summary_table(rows: Iterable[SummaryRow]) -> str:
    """
    Render summary rows as an aligned plain-text table.

    Columns: algorithm, variability, mean value, mean absolute relative
    error and the standard error of per-seed means.
    """
    header = ("algorithm", "variability", "mean value", "rel. error", "std. error", "seeds")
    lines = [header]
    for row in rows:
        lines.append((
            row.algorithm,
            f"{row.variability:.3f}",
            format_number(row.mean_value, decimals=2),
            format_percentage(row.mean_abs_rel_error, decimals=2),
            format_number(row.std_error, decimals=2),
            str(row.seed_count),
        ))

    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    rendered = [
        "  ".join(cell.rjust(width) if i else cell.ljust(width) for i, (cell, width) in enumerate(zip(line, widths)))
        for line in lines
    ]
    rendered.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(rendered)
