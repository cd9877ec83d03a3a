"""Shared exception types."""


class DagSchedError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(DagSchedError):
    """A caller broke a documented precondition."""


class ParseError(DagSchedError):
    """A file or request body could not be parsed into a model object."""


class ResourceConfigError(DagSchedError):
    """A resource description field failed validation."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


class ReservationConflict(DagSchedError):
    """A reservation attempt overlapped an already committed interval."""


class SimulationError(DagSchedError):
    """The event kernel aborted, or an entity detected an impossible state."""


class InternalMismatch(DagSchedError):
    """Simulated outcome diverged from the plan; always a bug, never data."""
