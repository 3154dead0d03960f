"""
Unit tests for the detection-efficiency toolkit.

Focused test suite covering the numerics, the detectors and the CLI surface.
"""
