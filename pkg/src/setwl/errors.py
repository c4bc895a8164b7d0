class SetWLError(Exception):
    """Base class for errors raised by this package."""


class GraphFormatError(SetWLError, ValueError):
    """Malformed graph input or a graph violating the simple-graph invariants."""


class GuardExceeded(SetWLError, ValueError):
    """An input is larger than the size guard of the requested operation."""


class ParameterError(SetWLError, ValueError):
    """Invalid (k, c), schedule, or other run parameter."""
