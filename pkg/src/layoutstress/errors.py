"""Domain-specific error types.

Everything inherits ValueError so callers that do not care about the
distinction can catch a single base class.
"""


class ParseError(ValueError):
    """Malformed graph or layout input; message carries file/line context."""


class DisconnectedGraphError(ValueError):
    """Shortest paths requested on a graph with unreachable vertex pairs."""


class DegenerateLayoutError(ValueError):
    """Layout has no usable scale (all points coincident, or zero distances
    where a metric needs positive ones)."""


class ConstantSeriesError(ValueError):
    """Rank correlation requested on a constant series (undefined)."""


class SizeGuardError(ValueError):
    """Refused a computation whose cost grows too fast for the input size."""
