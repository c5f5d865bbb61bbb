"""
Error handling utilities and decorators.
"""

import logging
import sys
from functools import wraps
from typing import Callable, TypeVar

from ..exceptions import (
    TsoCausalException,
    ConfigurationError,
    NotFoundError,
    TraceFormatError,
    ScheduleInvalidError,
    PreconditionViolatedError,
    FeedbackLoopPresentError,
    HorizonExhaustedError,
    NoIjOnlyChainError,
    BoundExceededError,
    FixtureDivergedError,
)
from .logging_utils import log_error_with_context

logger = logging.getLogger(__name__)

F = TypeVar('F', bound=Callable)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_BAD_INPUT = 2
EXIT_PRECONDITION = 3


def handle_exceptions(func: F) -> F:
    """
    Decorator to handle exceptions and convert them to process exit codes.

    The wrapped command returns its own exit code on success.

    Usage:
        @handle_exceptions
        def cmd_something(args) -> int:
            ...
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TraceFormatError as e:
            logger.warning(f"Trace error in {func.__name__} (line {e.line}): {e.message}")
            _report(f"trace error (line {e.line}): {e.message}")
            return EXIT_BAD_INPUT
        except (ConfigurationError, NotFoundError, ScheduleInvalidError) as e:
            logger.warning(f"Input error in {func.__name__}: {e.message}")
            _report(f"error: {e.message}")
            return EXIT_BAD_INPUT
        except (PreconditionViolatedError, FeedbackLoopPresentError, HorizonExhaustedError,
                NoIjOnlyChainError, BoundExceededError, FixtureDivergedError) as e:
            logger.info(f"Precondition failed in {func.__name__}: {e.message}")
            _report(f"precondition failed: {e.message}")
            return EXIT_PRECONDITION
        except TsoCausalException as e:
            log_error_with_context(logger, e, {"command": func.__name__, **e.details})
            _report(f"error: {e.message}")
            return EXIT_VIOLATIONS
        except Exception as e:
            logger.error(f"Unexpected error in {func.__name__}: {str(e)}", exc_info=True)
            _report(f"internal error: {e}")
            return EXIT_VIOLATIONS

    return wrapper


def _report(message: str):
    print(message, file=sys.stderr)
