# Log package for SAFE-QML
from .logger import (
    catch_and_log,
    enable_console_logging,
    get_logger,
    log_fold_event,
    log_function_call,
    log_performance,
)

__all__ = [
    'get_logger',
    'catch_and_log',
    'enable_console_logging',
    'log_fold_event',
    'log_function_call',
    'log_performance',
]
