"""
Storage Adapters

This module exports storage adapters for command results.
"""

from adapters.storage.local_storage import LocalStorage

__all__ = ["LocalStorage"]
