"""Exception types raised across taxosim.

Every error carries the offending codes/pseudonyms in ``offenders`` so the
CLI can report them without parsing messages.
"""

from __future__ import annotations


class TaxosimError(Exception):
    """Base class for all input and validation errors."""

    def __init__(self, message: str = "", offenders=()):
        self.offenders = tuple(offenders)
        if self.offenders and not message:
            message = ", ".join(map(str, self.offenders))
        super().__init__(message)

    @property
    def name(self) -> str:
        return type(self).__name__


# taxonomy parsing
class EmptyDocument(TaxosimError):
    pass


class MultipleRoots(TaxosimError):
    pass


class CycleDetected(TaxosimError):
    pass


class DuplicateChild(TaxosimError):
    pass


class UnknownCode(TaxosimError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


# set similarity
class EmptyMatrix(TaxosimError):
    pass


class NonFiniteWeight(TaxosimError):
    pass


class OutOfRangeDistance(TaxosimError):
    pass


class EmptySet(TaxosimError):
    pass


class ZeroSetSize(TaxosimError):
    pass


# cohort / truth ingestion
class DuplicatePseudonym(TaxosimError):
    pass


class EmptyCodeList(TaxosimError):
    pass


class MissingPseudonym(TaxosimError):
    pass


class AsymmetricTruth(TaxosimError):
    pass


class OutOfRangeScore(TaxosimError):
    pass


# correlation
class DimensionMismatch(TaxosimError):
    pass


class ZeroVariance(TaxosimError):
    pass


class UnknownCombo(TaxosimError):
    pass
