"""
CSV Writer for Result Storage

This module serializes convergence records and numeric tables to CSV and
parses convergence CSV back into records. Floats are written with 17
significant digits so every value round-trips bit-exactly.
"""

import csv
import io
import math
from pathlib import Path
from typing import Sequence

from domain.exceptions import ValidationError
from domain.models import ConvergenceRecord

CONVERGENCE_HEADER = [
    "n_a",
    "n_b",
    "mu1",
    "sigma1_sq",
    "re",
    "are",
    "u",
    "rhs",
    "relative_gap",
]


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    return f"{value:.17g}"


class CSVWriter:
    """
    Generates CSV content from convergence records and tables.

    Comma-delimited, "\\n" line endings, UTF-8.
    """

    HEADERS = CONVERGENCE_HEADER

    def generate_table(
        self, header: Sequence[str], rows: Sequence[Sequence[float]]
    ) -> bytes:
        buffer = io.StringIO()
        writer = csv.writer(buffer, delimiter=",", lineterminator="\n")
        writer.writerow(header)

        for row in rows:
            writer.writerow([format_float(float(v)) for v in row])

        return buffer.getvalue().encode("utf-8")

    def generate(self, records: Sequence[ConvergenceRecord]) -> bytes:
        """
        Generate CSV content from convergence records.

        Args:
            records: Sweep records in grid order.

        Returns:
            UTF-8 encoded CSV content with the convergence header.
        """
        rows = [[getattr(r, name) for name in self.HEADERS] for r in records]
        return self.generate_table(self.HEADERS, rows)

    def parse(self, content: bytes) -> list[ConvergenceRecord]:
        """Parse CSV produced by generate() back into records."""
        reader = csv.reader(io.StringIO(content.decode("utf-8")), delimiter=",")
        header = next(reader, None)
        if header != self.HEADERS:
            raise ValidationError(f"Unexpected convergence CSV header: {header}")

        return [
            ConvergenceRecord(**{name: float(v) for name, v in zip(self.HEADERS, row)})
            for row in reader
        ]


def emit_convergence_csv(records: Sequence[ConvergenceRecord], path: str | Path) -> Path:
    """
    Write sweep records to path.

    Raises:
        ValidationError: If records is empty.
        OSError: On I/O failure.
    """
    if not records:
        raise ValidationError("No convergence records to write")

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(CSVWriter().generate(records))
    return target
