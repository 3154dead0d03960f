"""
Detector Catalog Port

This module defines the interface for resolving detector names to
DetectorSpec objects. Adapters must implement this interface.
"""

from abc import ABC, abstractmethod

from domain.models import DetectorSpec


class DetectorCatalog(ABC):
    """
    Abstract interface for detector lookup.

    The application layer resolves the --a/--b names through this port and
    never imports concrete detector constructors.
    """

    @abstractmethod
    def get(self, name: str) -> DetectorSpec:
        """
        Resolve a detector by name.

        Args:
            name: Registered detector name, e.g. "np".

        Returns:
            The matching DetectorSpec.

        Raises:
            ConfigurationError: If the name is not registered.
        """
        pass

    @abstractmethod
    def names(self) -> list[str]:
        """Registered detector names in sorted order."""
        pass
