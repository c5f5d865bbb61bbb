"""
Custom exception hierarchy for tsocausal.

Provides structured exception handling with proper error categorization.
"""


class TsoCausalException(Exception):
    """Base exception for all tsocausal-specific errors."""

    def __init__(self, message: str, error_code: str = None, details: dict = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}


class NotEnabledError(TsoCausalException):
    """Raised when an action is applied while its precondition fails (a scheduler bug)."""
    pass


class UnknownVarError(TsoCausalException):
    """Raised when an action names a variable that was not declared."""
    pass


class InvalidActionError(TsoCausalException):
    """Raised when an action is issued by the wrong kind of agent."""
    pass


class ConflictingJointActionError(TsoCausalException):
    """Raised when two events of one joint action conflict."""

    def __init__(self, message: str, pair: tuple = (), error_code: str = None, details: dict = None):
        super().__init__(message, error_code, details)
        self.pair = pair


class DoubleInvokeError(TsoCausalException):
    """Raised when an Invoke reaches a process that still has a pending operation."""
    pass


class ScheduleInvalidError(TsoCausalException):
    """Raised when a schedule names an action outside the protocol's candidates."""
    pass


class MalformedHistoryError(TsoCausalException):
    """Raised when a Return has no pending Invoke."""
    pass


class NoIjOnlyChainError(TsoCausalException):
    """Raised when no chain restricted to {i, d_i, j, d_j} connects the two nodes."""
    pass


class HorizonExhaustedError(TsoCausalException):
    """Raised when a delay threshold falls beyond the run's horizon."""

    def __init__(self, message: str, agents: tuple = (), error_code: str = None, details: dict = None):
        super().__init__(message, error_code, details)
        self.agents = agents


class InternalReplayDivergenceError(TsoCausalException):
    """Raised when the delaying construction cannot replay an action. Signals a bug."""
    pass


class FeedbackLoopPresentError(TsoCausalException):
    """Raised when an operation contains a feedback loop."""
    pass


class PreconditionViolatedError(TsoCausalException):
    """Raised when a construction's precondition fails; details['clause'] names it."""

    def __init__(self, message: str, clause: str, error_code: str = None, details: dict = None):
        super().__init__(message, error_code, {**(details or {}), "clause": clause})
        self.clause = clause


class BoundExceededError(TsoCausalException):
    """Raised when a brute-force search exceeds its configured bound."""
    pass


class FixtureDivergedError(TsoCausalException):
    """Raised when a fixture operation does not complete within the completion bound."""
    pass


class TraceFormatError(TsoCausalException):
    """Raised when a trace file cannot be parsed or replayed; details['line'] is 1-based."""

    def __init__(self, message: str, line: int = None, error_code: str = None, details: dict = None):
        super().__init__(message, error_code, {**(details or {}), "line": line})
        self.line = line


class NotFoundError(TsoCausalException):
    """Raised when a named fixture, operation or node does not exist."""
    pass


class ConfigurationError(TsoCausalException):
    """Raised when configuration is invalid or missing."""
    pass
