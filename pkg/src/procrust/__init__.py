"""Deterministic decision-process engines over a pluggable agent layer.

Five analytical pipelines (QOC, sensitivity analysis, normal-form and
sequential games, risk management) whose every deterministic step is
recorded in an append-only run trace, plus the statistical tooling used
to evaluate them.
"""

__version__ = "0.1.0"

from procrust.errors import (
    AgentError,
    CapabilityError,
    InvariantViolation,
    ProcrustError,
    SchemaValidationError,
    TransportError,
    ValidationError,
)
from procrust.model import ProcessKind, Scenario

__all__ = [
    "AgentError",
    "CapabilityError",
    "InvariantViolation",
    "ProcessKind",
    "ProcrustError",
    "Scenario",
    "SchemaValidationError",
    "TransportError",
    "ValidationError",
]
