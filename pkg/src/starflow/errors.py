"""Exception hierarchy for starflow."""


class StarflowError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(StarflowError, ValueError):
    """Raised when raw input cannot form a valid social-request graph."""


class DuplicateSocialPair(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class NonpositiveCapacity(GraphError):
    pass


class NegativeUtility(GraphError):
    pass


class UnknownConfiguration(GraphError):
    """Structurally meaningless input, e.g. a self-request or a reused edge id."""


class KeyMismatch(StarflowError, KeyError):
    """A flow refers to edges or pairs that are not in the graph."""


class InvalidFlow(StarflowError, ValueError):
    pass


class NotACirculation(InvalidFlow):
    pass


class CapacityExceeded(StarflowError, ValueError):
    pass


class PrecisionExceeded(StarflowError, ValueError):
    """A numeric input has more fractional digits than the ingestion precision."""


class InsufficientNodes(StarflowError, ValueError):
    pass


class MalformedLine(StarflowError, ValueError):
    def __init__(self, lineno: int, line: str, reason: str = "") -> None:
        self.lineno = lineno
        self.line = line
        msg = f"line {lineno}: {line.strip()!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class TooLarge(StarflowError, ValueError):
    """Instance exceeds the brute-force oracle limits."""


class InvariantViolation(StarflowError, AssertionError):
    """A runtime check on solver progress or bounds failed."""
