"""
SAFE-QML Logger

This module provides the shared logging setup using loguru.
File sinks capture debug traces, run events and errors; the CLI adds a
stderr sink on demand so results files stay the only output channel.
"""

import functools
import os
import sys
import time
from pathlib import Path
from typing import Any, Callable

from loguru import logger

# Setup log directory
LOG_DIR = Path(os.environ.get("SAFEQML_LOG_DIR", Path(__file__).parent.parent.parent / "logs"))
LOG_DIR.mkdir(parents=True, exist_ok=True)

# Remove default handler
logger.remove()

# Detailed file handler for debugging
logger.add(
    LOG_DIR / "safeqml_debug.log",
    level="DEBUG",
    format=(
        "{time:YYYY-MM-DD HH:mm:ss.SSS} | "
        "{level: <8} | "
        "{name}:{function}:{line} | "
        "{message} | "
        "Extra: {extra}"
    ),
    rotation="50 MB",
    retention="7 days",
    compression="zip",
    enqueue=True,  # fold workers log from other processes
    backtrace=True,
    diagnose=True,
    serialize=False,
    catch=True
)

# Run events log (INFO and above)
logger.add(
    LOG_DIR / "safeqml_runs.log",
    level="INFO",
    format=(
        "{time:YYYY-MM-DD HH:mm:ss} | "
        "{level: <8} | "
        "{name} | "
        "{message}"
    ),
    rotation="50 MB",
    retention="30 days",
    compression="zip",
    enqueue=True,
    filter=lambda record: record["level"].name in ["INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"],
    catch=True
)

# Error-only log for critical issues
logger.add(
    LOG_DIR / "safeqml_errors.log",
    level="ERROR",
    format=(
        "{time:YYYY-MM-DD HH:mm:ss.SSS} | "
        "{level: <8} | "
        "{name}:{function}:{line} | "
        "{message} | "
        "Exception: {exception}"
    ),
    rotation="10 MB",
    retention="90 days",
    compression="zip",
    enqueue=True,
    backtrace=True,
    diagnose=True,
    catch=True
)

_console_sink_id: int | None = None


def get_logger(name: str):
    """
    Get a logger instance for a module with enhanced context binding.

    Args:
        name: Name of the module/component (usually __name__)

    Returns:
        Logger instance with bound context

    Example:
        >>> log = get_logger(__name__)
        >>> log.info("Fold 0 started")
    """
    return logger.bind(name=name)


def enable_console_logging(level: str = "WARNING") -> None:
    """Attach (or replace) the stderr sink used by the command-line front end."""
    global _console_sink_id
    if _console_sink_id is not None:
        logger.remove(_console_sink_id)
    _console_sink_id = logger.add(
        sys.stderr,
        level=level.upper(),
        format=(
            "<green>{time:HH:mm:ss.SSS}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{name}</cyan> | "
            "<level>{message}</level>"
        ),
        colorize=False,
        backtrace=False,
        diagnose=False,
        catch=True,
    )


def log_function_call(log_level: str = "DEBUG"):
    """
    Decorator to automatically log function calls with parameters and return values.

    Array arguments are summarized by shape so large feature matrices stay out of the log.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
    """
    def _describe(value: Any) -> str:
        shape = getattr(value, "shape", None)
        if shape is not None:
            return f"<array {tuple(shape)}>"
        text = str(value)
        return text if len(text) <= 80 else text[:77] + "..."

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            func_logger = get_logger(func.__module__)

            args_str = ", ".join(_describe(a) for a in args)
            kwargs_str = ", ".join(f"{k}={_describe(v)}" for k, v in kwargs.items())
            params = ", ".join(filter(None, [args_str, kwargs_str]))

            getattr(func_logger, log_level.lower())(
                f"🚀 Calling {func.__name__}({params})"
            )

            try:
                result = func(*args, **kwargs)
                getattr(func_logger, log_level.lower())(
                    f"✅ {func.__name__} completed successfully"
                )
                return result
            except Exception as e:
                func_logger.error(
                    f"❌ {func.__name__} failed with {type(e).__name__}: {e}"
                )
                raise

        return wrapper
    return decorator


def log_performance(func: Callable) -> Callable:
    """
    Decorator to log function performance metrics.

    Example:
        @log_performance
        def train_model(kind, train_set, config):
            ...
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        func_logger = get_logger(func.__module__)

        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            execution_time = (time.perf_counter() - start_time) * 1000
            func_logger.debug(
                f"⏱️  {func.__name__} executed in {execution_time:.2f}ms"
            )
            return result
        except Exception as e:
            execution_time = (time.perf_counter() - start_time) * 1000
            func_logger.error(
                f"💥 {func.__name__} failed after {execution_time:.2f}ms: {e}"
            )
            raise

    return wrapper


def log_fold_event(fold: int, kind: str, message: str, level: str = "INFO", **extra_data):
    """Log a per-fold progress line with the fold index and model kind bound as context."""
    fold_logger = get_logger("Experiment").bind(fold=fold, kind=kind, **extra_data)
    emoji_map = {
        "DEBUG": "🔍",
        "INFO": "ℹ️ ",
        "SUCCESS": "✅",
        "WARNING": "⚠️ ",
        "ERROR": "❌",
    }
    emoji = emoji_map.get(level.upper(), "📝")
    getattr(fold_logger, level.lower())(f"{emoji} [fold {fold} | {kind}] {message}")


def catch_and_log(
    level: str = "ERROR",
    message: str | None = None,
    reraise: bool = False,
    default_return: Any = None
):
    """
    Enhanced version of logger.catch with custom messages and return values.

    Args:
        level: Log level for caught exceptions
        message: Custom message prefix
        reraise: Whether to re-raise the exception
        default_return: Value to return if exception is caught and not re-raised
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            func_logger = get_logger(func.__module__)

            try:
                return func(*args, **kwargs)
            except Exception as e:
                error_msg = message or f"Exception in {func.__name__}"
                getattr(func_logger, level.lower())(
                    f"💥 {error_msg}: {type(e).__name__}: {e}"
                )

                if reraise:
                    raise
                return default_return

        return wrapper
    return decorator
