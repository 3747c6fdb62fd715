"""CSV artifacts: header row, 17 significant digits, no index column"""

import csv
from collections.abc import Iterable, Sequence
from pathlib import Path

from config import CSV_FLOAT_FORMAT
from utils.logger import logger

Cell = float | int | str


def format_cell(value: Cell) -> str:
    if isinstance(value, bool) or isinstance(value, str):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return format(float(value), CSV_FLOAT_FORMAT)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> None:
    """Write ``rows`` under ``header``; the parent directory must exist"""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])
            count += 1
    logger.debug(f"wrote {count} rows to {path}")
