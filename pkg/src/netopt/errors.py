"""Exception types shared across the package."""


class NetoptError(Exception):
    """Base class for all library errors."""


class UnattainableLevelError(NetoptError):
    """A confidence level lies outside the attainable range of a distribution."""


class EmptyCombinationError(NetoptError):
    """A linear combination of uncertain terms was empty."""


class ReductionDomainError(NetoptError):
    """A crisp reduction was evaluated outside the domain stated by its theorem."""


class ParseError(NetoptError):
    """Malformed instance text (DIMACS or JSON schema violation)."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif path is not None:
            where = f" (at {path})"
        super().__init__(message + where)


class InfeasibleReductionError(NetoptError):
    """A chance-constrained reduction admits no feasible crisp program."""


class NoPathError(NetoptError):
    """The sink is unreachable from the source."""


class ResourceLimitError(NetoptError):
    """An enumeration or search exceeded its configured limit."""


class NormalizationError(NetoptError):
    """A scalarization could not normalize (zero ideal value)."""


class ConfigurationError(NetoptError):
    """A solver or builder was invoked with a missing or inconsistent setting."""
