"""
Unified logging helpers.

Every message is prefixed with a ``[Context]`` tag so log lines from the
qstate kernel, the protocol runner and the trajectory sampler can be told
apart at a glance.
"""

import logging
import time
from functools import wraps

logger = logging.getLogger("friendrun")


def _format(context: str, message: str, marker: str = "", **kwargs) -> str:
    text = f"[{context}] {marker}{message}"
    return text.format(**kwargs) if kwargs else text


class LoggingUtils:
    """Context-tagged logging helpers."""

    @staticmethod
    def log_info(context: str, message: str, **kwargs) -> None:
        """
        Log at info level.

        Args:
            context: module or feature tag
            message: message, may contain ``{name}`` placeholders
            **kwargs: placeholder values
        """
        logger.info(_format(context, message, **kwargs))

    @staticmethod
    def log_warning(context: str, message: str, **kwargs) -> None:
        logger.warning(_format(context, message, **kwargs))

    @staticmethod
    def log_error(context: str, message: str, **kwargs) -> None:
        logger.error(_format(context, message, **kwargs))

    @staticmethod
    def log_debug(context: str, message: str, **kwargs) -> None:
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(_format(context, message, **kwargs))

    @staticmethod
    def log_success(context: str, message: str, **kwargs) -> None:
        """Info-level message marked as a success."""
        logger.info(_format(context, message, marker="✅ ", **kwargs))

    @staticmethod
    def log_progress(context: str, message: str, **kwargs) -> None:
        """Info-level message marked as progress."""
        logger.info(_format(context, message, marker="🔄 ", **kwargs))


def log_execution_time(context: str, level: str = "debug"):
    """
    Decorator logging how long the wrapped call took.

    Args:
        context: module or feature tag
        level: LoggingUtils level name (``debug``, ``info``, ...)
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            log_func = getattr(LoggingUtils, f"log_{level}")
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                elapsed = time.perf_counter() - start_time
                LoggingUtils.log_error(
                    context, "Failed {name} after {elapsed:.3f}s: {error}",
                    name=func.__name__, elapsed=elapsed, error=e,
                )
                raise
            elapsed = time.perf_counter() - start_time
            log_func(context, "Completed {name} in {elapsed:.3f}s", name=func.__name__, elapsed=elapsed)
            return result

        return wrapper

    return decorator
