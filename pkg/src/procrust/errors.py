"""Exception taxonomy, grouped by the CLI's exit-code categories."""


class ProcrustError(Exception):
    """Base class for all package errors."""


class ValidationError(ProcrustError):
    """Bad input data or misuse of a documented contract (exit code 2)."""


class SequenceGapError(ValidationError):
    """Trace event sequence number does not extend the trace."""


class AgentError(ProcrustError):
    """Agent-side failure (exit code 3)."""


class CapabilityError(AgentError):
    """Task kind outside the persona's declared capabilities."""


class SchemaValidationError(AgentError):
    """Agent response rejected by its response schema after retries."""


class TransportError(AgentError):
    """Remote endpoint unreachable or returned an unusable transport payload."""


class InvariantViolation(ProcrustError):
    """Internal consistency check failed (exit code 4)."""
