"""
Result Storage Port

This module defines the interface for persisting command outputs.
Adapters must implement this interface.
"""

from abc import ABC, abstractmethod
from typing import Any, Sequence

from domain.models import ConvergenceRecord


class ResultStorage(ABC):
    """
    Abstract interface for result storage.

    Every command writes exactly one artifact through one of these methods.
    """

    @abstractmethod
    def save_report(self, command: str, payload: dict[str, Any]) -> str:
        """
        Save a single-shot report as a versioned JSON document.

        Returns:
            The path where the report was saved.
        """
        pass

    @abstractmethod
    def save_records(self, records: Sequence[ConvergenceRecord]) -> str:
        """
        Save convergence-sweep records as CSV.

        Returns:
            The path where the records were saved.
        """
        pass

    @abstractmethod
    def save_table(self, header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
        """
        Save a numeric table (e.g. a ROC curve) as CSV.

        Returns:
            The path where the table was saved.
        """
        pass
