"""
Exception types shared by every brlab layer.

Budget exhaustion inside a search is reported through result statuses
(``indeterminate``), not through these exceptions.
"""


class BrLabError(Exception):
    """Base class for all brlab errors."""


class DomainError(BrLabError, ValueError):
    """An operation was called outside the hypothesis range it is defined on."""


class GraphFormatError(BrLabError, ValueError):
    """Malformed graph, coloring or certificate text. The message names the field."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class ResourceLimitError(BrLabError, RuntimeError):
    """A request exceeds a configured budget; ``flag`` names the knob that controls it."""

    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(f"{message} (raise {flag} to allow it)")


class IntegrityError(BrLabError, ValueError):
    """A report or certificate disagrees with the object it describes."""


class StructuralFailure(BrLabError, ValueError):
    """The target graph cannot be placed in the host at all (too many vertices)."""
