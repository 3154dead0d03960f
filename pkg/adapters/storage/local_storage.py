"""
Local Filesystem Storage Adapter

This module implements the ResultStorage port for the local filesystem.
"""

import logging
from pathlib import Path
from typing import Any, Sequence

from adapters.storage.csv_writer import CSVWriter, emit_convergence_csv
from adapters.storage.json_writer import JSONWriter
from domain.models import ConvergenceRecord
from ports.result_storage import ResultStorage


class LocalStorage(ResultStorage):
    """
    Local filesystem adapter for result storage.

    Writes one artifact to a fixed output path.
    """

    def __init__(self, output_path: str | Path):
        """
        Initialize local storage adapter.

        Args:
            output_path: File the artifact is written to.
        """
        self.output_path = Path(output_path)
        self.logger = logging.getLogger(__name__)
        self.csv_writer = CSVWriter()
        self.json_writer = JSONWriter()

    def _write(self, content: bytes) -> str:
        self.output_path.parent.mkdir(parents=True, exist_ok=True)
        self.output_path.write_bytes(content)
        self.logger.info(f"Saved locally to: {self.output_path}")
        return str(self.output_path)

    def save_report(self, command: str, payload: dict[str, Any]) -> str:
        return self._write(self.json_writer.generate(command, payload))

    def save_records(self, records: Sequence[ConvergenceRecord]) -> str:
        path = emit_convergence_csv(records, self.output_path)
        self.logger.info(f"Saved {len(records)} convergence records to: {path}")
        return str(path)

    def save_table(self, header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
        return self._write(self.csv_writer.generate_table(header, rows))
