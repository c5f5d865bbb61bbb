"""
Logging helpers shared by the engine, the analyses and the command line.
"""

import argparse
import logging
from functools import wraps

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def get_logger(name: str) -> logging.Logger:
    """Logger for a module, named after it (pass __name__)."""
    return logging.getLogger(name)


def configure_logging(level: str = "WARNING"):
    """Configure root logging once, at the command-line entry point."""
    logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING), format=LOG_FORMAT)


def log_function_call(logger: logging.Logger, level: int = logging.DEBUG):
    """
    Decorator for command handlers: logs the parsed flags on entry and the
    exit code on the way out.

    Args:
        logger: Logger of the module defining the command
        level: Logging level for entry and exit lines (default: DEBUG)
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            flags = [vars(a) if isinstance(a, argparse.Namespace) else a for a in args]
            logger.log(level, f"{func.__name__} flags={flags}")
            try:
                code = func(*args, **kwargs)
            except Exception as e:
                logger.debug(f"{func.__name__} raised {type(e).__name__}")
                raise
            logger.log(level, f"{func.__name__} exit={code}")
            return code
        return wrapper
    return decorator


def log_analysis_action(logger: logging.Logger, run_label: str, action: str, details: dict = None):
    """
    One audit line per analysis or construction.

    Args:
        logger: Logger instance
        run_label: Short description of the run analysed (fixture name, horizon)
        action: Analysis name, e.g. "dtf_transform" or "check_snapshot_ob"
        details: Parameters and outcome of the analysis
    """
    logger.info(f"ANALYSIS {action} on {run_label}: {details or {}}")


def log_error_with_context(logger: logging.Logger, error: Exception, context: dict = None):
    # error_code is set on every package exception; plain exceptions log their class name
    code = getattr(error, "error_code", None) or type(error).__name__
    logger.error(f"[{code}] {error}", extra={"context": context or {}}, exc_info=True)
