"""
Command-line Adapters

This module exports the argument parser for the detection toolkit CLI.
"""

from adapters.cli.arguments import build_parser, parse_run_config

__all__ = ["build_parser", "parse_run_config"]
