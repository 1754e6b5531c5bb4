"""
friendrun CLI Module.

Command-line interface for running scenarios, settling the bet and sweeping angles.
"""

from friendrun.cli.main import cli

__all__ = ["cli"]
