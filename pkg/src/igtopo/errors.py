"""Exception hierarchy shared by the generators, metrics and I/O layers."""


class TopologyError(Exception):
    """Base class for every error raised by this package."""


class UnknownNodeError(TopologyError, KeyError):
    """An edge referenced a node identifier that is not in the graph."""


class NoCandidateError(TopologyError):
    """Preferential sampling found no eligible node with positive weight."""


class ConfigError(TopologyError, ValueError):
    """Invalid generator configuration."""


class UnreachableTargetError(TopologyError):
    """The requested link total is below what the growth loop already produced."""


class FitError(TopologyError):
    """Not enough data to fit an exponent."""


class UndefinedMetricError(TopologyError, ValueError):
    """A metric was requested where it is not defined (e.g. a club of fewer than 2 nodes)."""


class EdgeListError(TopologyError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
