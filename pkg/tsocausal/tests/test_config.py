"""
Tests for environment configuration and error-to-exit-code mapping
"""

import pytest

from tsocausal.config import (
    DEFAULT_COMPLETION_BOUND,
    DEFAULT_LIN_BOUND,
    get_completion_bound,
    get_default_seed,
    get_lin_bound,
    get_log_level,
)
from tsocausal.exceptions import (
    BoundExceededError,
    ConfigurationError,
    InternalReplayDivergenceError,
    NotFoundError,
    PreconditionViolatedError,
    TraceFormatError,
)
from tsocausal.utils.error_handlers import (
    EXIT_BAD_INPUT,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_VIOLATIONS,
    handle_exceptions,
)


@pytest.mark.unit
class TestConfig:
    """TSOCAUSAL_* environment variables"""

    def test_defaults(self):
        assert get_default_seed() == 0
        assert get_lin_bound() == DEFAULT_LIN_BOUND
        assert get_completion_bound() == DEFAULT_COMPLETION_BOUND
        assert get_log_level() == "WARNING"

    def test_overrides(self, monkeypatch):
        monkeypatch.setenv("TSOCAUSAL_SEED", "0")
        monkeypatch.setenv("TSOCAUSAL_LIN_BOUND", "7")
        monkeypatch.setenv("TSOCAUSAL_COMPLETION_BOUND", "12")
        monkeypatch.setenv("TSOCAUSAL_LOG_LEVEL", "debug")
        assert get_default_seed() == 0
        assert get_lin_bound() == 7
        assert get_completion_bound() == 12
        assert get_log_level() == "DEBUG"

    def test_blank_value_means_default(self, monkeypatch):
        monkeypatch.setenv("TSOCAUSAL_LIN_BOUND", " ")
        assert get_lin_bound() == DEFAULT_LIN_BOUND

    @pytest.mark.parametrize("raw", ["ten", "0", "-3"])
    def test_invalid_bound(self, monkeypatch, raw):
        monkeypatch.setenv("TSOCAUSAL_LIN_BOUND", raw)
        with pytest.raises(ConfigurationError) as exc:
            get_lin_bound()
        assert exc.value.error_code == "bad_env"

    def test_negative_seed(self, monkeypatch):
        monkeypatch.setenv("TSOCAUSAL_SEED", "-1")
        with pytest.raises(ConfigurationError):
            get_default_seed()


@pytest.mark.unit
class TestExitCodes:
    """Exceptions raised by commands become exit codes"""

    @pytest.mark.parametrize("error, code", [
        (TraceFormatError("bad", line=3), EXIT_BAD_INPUT),
        (NotFoundError("missing"), EXIT_BAD_INPUT),
        (ConfigurationError("bad flag"), EXIT_BAD_INPUT),
        (PreconditionViolatedError("pending", clause="complete"), EXIT_PRECONDITION),
        (BoundExceededError("too many"), EXIT_PRECONDITION),
        (InternalReplayDivergenceError("diverged"), EXIT_VIOLATIONS),
        (RuntimeError("boom"), EXIT_VIOLATIONS),
    ])
    def test_mapping(self, error, code, capsys):
        @handle_exceptions
        def command():
            raise error

        assert command() == code
        assert capsys.readouterr().err

    def test_success_passes_through(self):
        @handle_exceptions
        def command():
            return EXIT_OK

        assert command() == EXIT_OK

    def test_trace_errors_name_the_line(self, capsys):
        @handle_exceptions
        def command():
            raise TraceFormatError("not a JSON object", line=4)

        command()
        assert "line 4" in capsys.readouterr().err

    def test_precondition_clause_in_details(self):
        error = PreconditionViolatedError("no fence allowed", clause="fence")
        assert error.details["clause"] == "fence"
        assert error.clause == "fence"
