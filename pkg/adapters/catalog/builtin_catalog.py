"""
Built-in Detector Catalog

This module implements the DetectorCatalog port over a name -> constructor
registry.
"""

import logging
from typing import Callable, Mapping

from domain.exceptions import ConfigurationError
from domain.models import DetectorSpec
from ports.detector_catalog import DetectorCatalog


class BuiltinDetectorCatalog(DetectorCatalog):
    """Catalog backed by an in-memory registry of detector constructors."""

    def __init__(self, registry: Mapping[str, Callable[[], DetectorSpec]]):
        self.registry = dict(registry)
        self.logger = logging.getLogger(__name__)

    def get(self, name: str) -> DetectorSpec:
        try:
            constructor = self.registry[name]
        except KeyError:
            raise ConfigurationError(
                f"Unknown detector {name!r} (choose from {', '.join(self.names())})"
            ) from None

        detector = constructor()
        self.logger.debug(f"Resolved detector {name!r}: {detector.description}")
        return detector

    def names(self) -> list[str]:
        return sorted(self.registry)
