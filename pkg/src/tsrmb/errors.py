"""Exception hierarchy shared by every module."""


class TSRMBError(Exception):
    """Base class for all errors raised by the solver kit."""


class NoPerfectMatching(TSRMBError):
    """Some left vertex cannot be saturated with allowed edges."""


class InsufficientDrivers(TSRMBError):
    """Not enough drivers for the riders that must be served."""


class NonUniformScenarios(TSRMBError):
    """An operation needing a uniform scenario size got mixed sizes."""


class ScenarioKindError(TSRMBError):
    """The operation needs the other kind of scenario set (explicit vs implicit)."""


class DisconnectedVertices(TSRMBError):
    """Metric completion left a pair of vertices at infinite distance."""


class EnumerationTooLarge(TSRMBError):
    """An exhaustive evaluation would exceed the enumeration limit."""


class BadDistribution(TSRMBError):
    """Scenario probabilities are negative, misaligned, or do not sum to one."""


class SurplusNotZero(TSRMBError):
    pass


class SurplusTooLarge(TSRMBError):
    pass


class NegativeSurplus(TSRMBError):
    pass


class MalformedTriples(TSRMBError):
    pass


class UncoveredElement(TSRMBError):
    pass


class OddCardinality(TSRMBError):
    pass


class EmptyWindow(TSRMBError):
    """A time window produced no riders for some stage."""


class ParseError(TSRMBError):
    """Malformed trip-log input. ``line`` is the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InstanceFormatError(TSRMBError):
    """An instance or decision file does not follow the JSON schema."""
