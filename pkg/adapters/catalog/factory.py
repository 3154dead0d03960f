"""
Detector Catalog Factory

This module provides a factory function to create the detector catalog.
"""

from adapters.catalog.builtin_catalog import BuiltinDetectorCatalog
from config.detectors import DETECTORS


def create_detector_catalog() -> BuiltinDetectorCatalog:
    """
    Create the catalog of built-in detectors.

    Returns:
        Catalog over config.detectors.DETECTORS.
    """
    return BuiltinDetectorCatalog(registry=DETECTORS)
