"""Exception hierarchy.

Every error raised by the library derives from :class:`LinextError`; most
also derive from :class:`ValueError` so callers can treat bad input the usual
way.
"""


class LinextError(Exception):
    pass


class ParseError(LinextError, ValueError):
    """Malformed input document."""


class RangeError(LinextError, ValueError):
    """An element label outside ``1..n``."""


class CycleError(LinextError, ValueError):
    """Generating relations contain a directed cycle."""


class ArityError(LinextError, ValueError):
    pass


class DomainError(LinextError, ValueError):
    pass


class EmptySetError(LinextError, ValueError):
    pass


class PartitionError(LinextError, ValueError):
    """Blocks are not a partition of the ground set."""


class NotModularError(LinextError, ValueError):
    pass


class ShapeError(LinextError, ValueError):
    """A skeleton does not have the shape a formula needs."""


class ConditionError(LinextError, ValueError):
    """The edge conditions of a joined structure do not hold."""


class NotTransitivelyOrientableError(LinextError, ValueError):
    pass


class ResolutionError(LinextError):
    """None of the three merge cases yields a poset partition."""


class NotPermutationError(LinextError, ValueError):
    pass


class NotTournamentError(LinextError, ValueError):
    pass


class CyclicError(LinextError, ValueError):
    pass


class SizeError(LinextError):
    """Input exceeds a configured size limit."""


class MismatchError(LinextError):
    """Independent counting routes disagree (an implementation bug)."""


class InfeasibleError(LinextError):
    """No reverse-edge set reaches the requested count."""

    def __init__(self, message, nearest=()):
        super().__init__(message)
        self.nearest = tuple(nearest)
