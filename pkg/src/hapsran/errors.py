"""Exception hierarchy shared by all simulator modules."""


class HapsRanError(Exception):
    """Base class for all simulator errors."""


class InvalidArgumentError(HapsRanError, ValueError):
    """An argument is out of its documented domain."""


class DegenerateTraceError(HapsRanError):
    """A traffic trace is constant, so a two-point affine fit is impossible."""


class NoCandidateError(HapsRanError):
    """No usable candidate trace remained after filtering."""


class LoadExceedsCapacityError(HapsRanError):
    """A base station was asked to carry more traffic than its capacity."""


class InstanceTooLargeError(HapsRanError):
    """The exhaustive solver was handed an instance beyond its size limit."""


class UndefinedMetricError(HapsRanError):
    """A ratio metric was requested with a zero denominator."""
