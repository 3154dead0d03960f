"""
Detector Catalog Adapters

This module exports detector catalog adapters.
"""

from adapters.catalog.builtin_catalog import BuiltinDetectorCatalog

__all__ = ["BuiltinDetectorCatalog"]
