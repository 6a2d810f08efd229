"""Exception types raised by transclust."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class EdgeListParseError(ValueError):
    """A line of an edge-list file could not be parsed."""

    def __init__(self, lineno, line, reason="expected two non-negative integer tokens"):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class EstimationError(RuntimeError):
    """A Monte Carlo estimate is undefined for the sampled data."""
