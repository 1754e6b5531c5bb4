from friendrun.utils.exception_handler import ExceptionHandler
from friendrun.utils.logging_utils import LoggingUtils, log_execution_time

__all__ = ["ExceptionHandler", "LoggingUtils", "log_execution_time"]
