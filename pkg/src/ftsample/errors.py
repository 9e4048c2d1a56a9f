"""Exception types shared across the package.

Every error raised on a contract violation derives from FTSampleError so
callers can catch the package's failures with one handler while letting
programming errors (TypeError and friends) propagate.
"""

from __future__ import annotations


class FTSampleError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSizeError(FTSampleError):
    """A transform or domain size is zero, negative, or otherwise unusable."""


class DomainTooSmallError(FTSampleError):
    """A target domain cannot hold the given state (q smaller than the support)."""


class DegenerateDistributionError(FTSampleError):
    """A distribution normalizer fell below the representable threshold."""


class UndefinedBoundError(FTSampleError):
    """A bound's denominator vanishes, so the inequality has no content."""


class DegenerateInstanceError(FTSampleError):
    """A problem instance violates the preconditions of a pipeline step."""


class NoSmoothNumberError(FTSampleError):
    """No admissible smooth number exists in the requested interval."""


class RecoveryFailedError(FTSampleError):
    """A recovery pipeline exhausted its sample budget without a verified answer.

    The observations consumed along the way are kept on the exception so a
    caller can inspect what the failed run actually saw.
    """

    def __init__(self, message: str, samples=None):
        super().__init__(message)
        self.samples = list(samples) if samples is not None else []


class ConfigError(FTSampleError):
    """An experiment configuration failed validation.

    ``errors`` is a list of (field_path, message) pairs, e.g.
    ``("grid.p", "must be a nonempty list of integers >= 2")``.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = ", ".join(f"{path}: {msg}" for path, msg in self.errors)
        super().__init__(f"invalid configuration: {lines}")
