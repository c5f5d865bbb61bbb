"""
Configuration loader for tsocausal.
Reads from a .env file when one exists.
Uses environment variables with sensible defaults.
"""
import os
from pathlib import Path
from dotenv import load_dotenv

from .exceptions import ConfigurationError

# Try multiple paths to handle different execution contexts
_env_paths = [
    Path(__file__).parent.parent / ".env",  # Repository root
    Path(os.getcwd()) / ".env",  # Current working directory
]

_env_loaded = False

DEFAULT_SEED = 0
DEFAULT_LIN_BOUND = 10
DEFAULT_COMPLETION_BOUND = 64
DEFAULT_LOG_LEVEL = "WARNING"


def _ensure_env_loaded():
    """Load .env file if not already loaded."""
    global _env_loaded
    if _env_loaded:
        return

    for env_path in _env_paths:
        if env_path.exists():
            load_dotenv(env_path, override=False)
            break

    _env_loaded = True  # Mark as loaded even if file not found (to avoid repeated checks)


def _positive_int(name: str, default: int, allow_zero: bool = False) -> int:
    _ensure_env_loaded()

    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default

    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}", error_code="bad_env")

    if value < 0 or (value == 0 and not allow_zero):
        raise ConfigurationError(f"{name} must be positive, got {value}", error_code="bad_env")
    return value


def get_default_seed() -> int:
    """
    Get the default seed for randomized schedules.
    Priority: TSOCAUSAL_SEED env var > 0
    """
    return _positive_int("TSOCAUSAL_SEED", DEFAULT_SEED, allow_zero=True)


def get_lin_bound() -> int:
    """Maximum number of complete operations the linearizability search accepts."""
    return _positive_int("TSOCAUSAL_LIN_BOUND", DEFAULT_LIN_BOUND)


def get_completion_bound() -> int:
    """Rounds a fixture operation may take to complete when running alone."""
    return _positive_int("TSOCAUSAL_COMPLETION_BOUND", DEFAULT_COMPLETION_BOUND)


def get_log_level() -> str:
    """
    Get the logging level name.
    Priority: TSOCAUSAL_LOG_LEVEL env var > WARNING
    """
    _ensure_env_loaded()

    level = os.getenv("TSOCAUSAL_LOG_LEVEL")
    if level:
        return level.upper()

    return DEFAULT_LOG_LEVEL
