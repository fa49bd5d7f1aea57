import csv
import io
import math
from enum import StrEnum

from scaling_witness.models.scan import ScanGrid
from scaling_witness.utils.constants import CSV_PRECISION, UNDEFINED_MARKER


class GridFormat(StrEnum):
    CSV = "csv"


def _format_value(value: float) -> str:
    """Render a float with enough significant digits to read it back exactly."""
    return UNDEFINED_MARKER if math.isnan(value) else f"{value:.{CSV_PRECISION}g}"


def emit_grid(grid: ScanGrid, grid_format: GridFormat = GridFormat.CSV) -> str:
    """
    Serialize a scan grid, one row per node, first free axis outermost.

    Raw values are `nan` at nodes where some λ_i is zero; regularized values are always present.

    Args:
        grid (ScanGrid): The scan grid
        grid_format (GridFormat): The output format, only CSV is supported

    Returns:
        str: The serialized grid with a `lambda_<a>,lambda_<b>,sigma_raw,sigma_reg` header

    """
    if grid_format != GridFormat.CSV:
        raise ValueError(f"Unsupported grid format {grid_format!r}")

    first, second = grid.plan.axes
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([f"lambda_{first}", f"lambda_{second}", "sigma_raw", "sigma_reg"])

    for row, first_value in enumerate(grid.nodes):
        for column, second_value in enumerate(grid.nodes):
            writer.writerow([
                _format_value(first_value),
                _format_value(second_value),
                _format_value(grid.raw[row, column]),
                _format_value(grid.regularized[row, column]),
            ])

    return buffer.getvalue()
