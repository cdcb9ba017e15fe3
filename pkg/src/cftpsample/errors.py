"""Exception types shared across the package.

Every error raised on a bad input or an exhausted resource budget derives
from SamplerError, so callers (and the command line driver) can catch one
type and report cleanly.  Statistical *failures* are not exceptions: a
chi-square test that rejects returns a result object with passed=False.
"""

from __future__ import annotations


class SamplerError(Exception):
    """Base class for all errors raised by this package."""


class CycleDetected(SamplerError):
    """The cover relation contains a directed cycle (or a self-cover)."""


class RedundantCover(SamplerError):
    """A cover pair is implied by transitivity (or listed twice)."""


class IdentifierOutOfRange(SamplerError):
    """A cover pair references an element id outside 0..m-1."""


class CapacityExceeded(SamplerError):
    """A requested poset would exceed the configured element capacity."""


class EmptyRegion(SamplerError):
    """Path corridor bounds admit no monotone lattice path."""


class NotBipartite(SamplerError):
    """Graph input violates the black/white bipartition contract."""


class NotTileable(SamplerError):
    """Region admits no domino tiling (color imbalance or geometry)."""


class NotSimplyConnected(SamplerError):
    """Region has a hole or a pinch point; height functions need a disk."""


class NonPositiveQ(SamplerError):
    """Coin bias parameter q must be a positive finite real."""


class HorizonExceeded(SamplerError):
    """Backward doubling passed the user-supplied horizon cap without coalescing."""


class MaxTriesExceeded(SamplerError):
    """Rank-conditioned rejection sampling ran out of attempts.

    hits maps each rank that came up to how often, for tuning q.
    """

    def __init__(self, message: str, tries: int, hits: dict):
        super().__init__(message)
        self.tries = tries
        self.hits = hits


class NotGraded(SamplerError):
    """Rank-parity scheduling requested on a system without a grading."""


class LimitExceeded(SamplerError):
    """State enumeration hit its explicit size limit."""


class BudgetExceeded(SamplerError):
    """An exact computation (counting, census, absorption solve) hit its budget."""


class ExpectedCountTooSmall(SamplerError):
    """Chi-square approximation unreliable: some expected cell count is below 5."""


class UnsupportedFamily(SamplerError):
    """The requested operation is not available for this family."""
