"""Exception hierarchy.

Errors fall in two families so front ends can map them to exit codes:
``DataError`` for problems with inputs or queried objects, and
``InsufficientDataError`` when there is not enough evidence to answer.
"""


class SimplexPredError(Exception):
    """Base class for all package errors."""


class DataError(SimplexPredError):
    pass


class InsufficientDataError(SimplexPredError):
    pass


# complex_core
class InvalidSimplex(DataError, ValueError):
    pass


class InvalidDimension(DataError, ValueError):
    pass


# neighborhood / features
class UnknownVertex(DataError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SimplexNotPresent(DataError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CandidateOutsideBall(DataError, ValueError):
    pass


class VertexAlreadyMember(DataError, ValueError):
    pass


class DimensionMismatch(DataError, ValueError):
    pass


# cooccurrence
class SliceOrderViolation(DataError, ValueError):
    pass


# estimator
class LabelSliceMissing(DataError, IndexError):
    pass


class InsufficientData(InsufficientDataError):
    """Estimator denominator is zero.

    ``fallback`` holds the global base rate of the index (realized total over
    possible total) so the caller can decide whether to use it.
    """

    def __init__(self, message, fallback=float("nan")):
        super().__init__(message)
        self.fallback = fallback


class InsufficientSlices(InsufficientDataError):
    pass


# ingestion
class MalformedDataset(DataError):
    pass


class ParseError(DataError):
    pass


class TooManySlices(DataError, ValueError):
    pass


# evaluation
class InsufficientPositives(InsufficientDataError):
    def __init__(self, message, achievable=0):
        super().__init__(message)
        self.achievable = achievable


class InsufficientNegatives(InsufficientDataError):
    def __init__(self, message, achievable=0):
        super().__init__(message)
        self.achievable = achievable


class DegenerateLabels(InsufficientDataError, ValueError):
    pass


class EmptyGrid(DataError, ValueError):
    pass


# synthetic
class DegenerateStart(DataError):
    pass


class DegenerateDistribution(InsufficientDataError):
    pass
