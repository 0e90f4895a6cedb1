"""Diagnostics time series as CSV.

The column order is frozen (``CSV_COLUMNS``) and floats are written with 17
significant digits so that a read-back reproduces every f64 exactly.
"""

import csv
from pathlib import Path
from typing import (
    Iterable,
    List,
    Optional,
    Sequence,
    TextIO,
    Union,
)

from pydantic import ValidationError

from odhall.schemas import TimeSeriesRecord
from odhall.shared.constants import CSV_COLUMNS
from odhall.shared.exceptions import (
    OutputWriteError,
    SeriesFormatError,
    StorageError,
)

PathLike = Union[str, Path]


class SeriesWriter:
    """Streams records to a CSV file, header first."""

    def __init__(self, path: PathLike):
        self.path = Path(path)
        self._handle: Optional[TextIO] = None
        self._writer = None
        self.rows = 0

    def __enter__(self) -> "SeriesWriter":
        try:
            self._handle = open(self.path, "w", newline="", encoding="utf-8")
        except OSError as e:
            raise OutputWriteError(f"Cannot open series file: {e}", self.path)
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(CSV_COLUMNS)
        return self

    def write(self, record: TimeSeriesRecord) -> None:
        self._writer.writerow(record.to_row())
        self.rows += 1

    def __exit__(self, exc_type, exc, tb) -> None:
        self._handle.close()


def write_series(path: PathLike, records: Iterable[TimeSeriesRecord]) -> Path:
    with SeriesWriter(path) as writer:
        for record in records:
            writer.write(record)
    return Path(path)


def parse_series(handle: Iterable[str], path: PathLike = None) -> List[TimeSeriesRecord]:
    """Records from CSV text with the frozen header.

    Raises:
        SeriesFormatError: If the header, a value or the time ordering is wrong
    """
    reader = csv.DictReader(handle)
    header = tuple(reader.fieldnames or ())
    if header != CSV_COLUMNS:
        raise SeriesFormatError(
            f"Unexpected series header {list(header)}, expected {list(CSV_COLUMNS)}", path
        )
    records: List[TimeSeriesRecord] = []
    for line, row in enumerate(reader, start=2):
        if None in row or any(value is None for value in row.values()):
            raise SeriesFormatError(f"Wrong number of columns on line {line}", path)
        try:
            record = TimeSeriesRecord.from_row(row)
        except (ValueError, ValidationError) as e:
            raise SeriesFormatError(f"Invalid value on line {line}: {e}", path)
        if records and not record.t > records[-1].t:
            raise SeriesFormatError(f"Time not strictly increasing on line {line}", path)
        records.append(record)
    return records


def read_series(path: PathLike) -> List[TimeSeriesRecord]:
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            return parse_series(handle, path)
    except OSError as e:
        raise StorageError(f"Cannot read series file: {e}", path)


def uniform_spacing(records: Sequence[TimeSeriesRecord]) -> float:
    """Spacing of the record times (their mean difference)."""
    if len(records) < 2:
        raise SeriesFormatError("Need at least two records to infer the time step")
    return (records[-1].t - records[0].t) / (len(records) - 1)
