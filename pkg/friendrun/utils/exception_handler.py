"""
Unified exception handling for the command line.

Maps library exceptions onto exit codes and logs a diagnostic that names
the offending configuration field when there is one.
"""

import logging
import traceback

import click
from pydantic import ValidationError

from friendrun.config.constants import ExceptionConstants, ExitCodes
from friendrun.errors import ScenarioConfigError

logger = logging.getLogger("friendrun")


class ExceptionHandler:
    """Classifies errors and logs them consistently."""

    @staticmethod
    def exit_code_for(error: BaseException) -> int:
        """Exit code for an exception raised while executing a command."""
        if isinstance(error, (ValidationError, click.UsageError)):
            return ExitCodes.CONFIGURATION
        if isinstance(error, ExceptionConstants.CONFIGURATION_EXCEPTIONS):
            return ExitCodes.CONFIGURATION
        if isinstance(error, ExceptionConstants.NUMERICAL_EXCEPTIONS):
            return ExitCodes.NUMERICAL
        return ExitCodes.FAILURE

    @staticmethod
    def describe(error: BaseException) -> str:
        """One-line diagnostic; configuration errors lead with the field name."""
        if isinstance(error, ScenarioConfigError):
            return f"invalid configuration field '{error.field}': {error.message}"
        if isinstance(error, ValidationError):
            parts = []
            for item in error.errors():
                field = ".".join(str(p) for p in item.get("loc", ())) or "config"
                parts.append(f"invalid configuration field '{field}': {item.get('msg')}")
            return "; ".join(parts)
        if isinstance(error, ExceptionConstants.NUMERICAL_EXCEPTIONS):
            return f"numerical invariant violated: {error}"
        return f"{type(error).__name__}: {error}"

    @staticmethod
    def handle_command_error(error: BaseException, context: str, debug: bool = False) -> int:
        """
        Log a command failure and return the exit code to use.

        Args:
            error: the exception raised by the command body
            context: command name, used as log context
            debug: also log the traceback

        Returns:
            exit code (2 configuration, 3 numerical, 1 otherwise)
        """
        code = ExceptionHandler.exit_code_for(error)
        logger.error(f"[{context}] 💥 {ExceptionHandler.describe(error)}")
        if debug:
            logger.debug(traceback.format_exc())
        return code
