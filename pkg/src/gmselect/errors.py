"""Exception types shared across the package."""


class GmselectError(Exception):
    """Base class for all package errors."""


class DataError(GmselectError):
    """Base class for dataset ingestion errors."""


class MissingCell(DataError):
    """A (subject, time) pair is absent; the complete-case contract is violated."""


class DuplicateCell(DataError):
    """A (subject, time) pair appears more than once."""


class NonNumericValue(DataError):
    """A numeric column holds a value that does not parse as a float."""


class IoFailure(GmselectError):
    """Reading or writing a file failed."""


class TooFewSubjects(GmselectError):
    """More clusters requested than subjects available."""


class EmptySubset(GmselectError):
    """An operation requires at least one time point."""


class DegenerateComponent(GmselectError):
    """A mixture component collapsed (tiny effective size, singular design,
    or repeated variance-floor hits); the fit is unusable."""


class NumericalUnderflow(GmselectError):
    """All component densities vanished for some subject."""


class AllFitsFailed(GmselectError):
    """Every candidate number of components failed to fit."""


class RankDeficientDesign(GmselectError):
    """A regression design matrix is rank deficient (or has too few rows)."""


class LengthMismatch(GmselectError):
    """Two label sequences have different lengths."""


class ShapeMismatch(GmselectError):
    """Two matrices have different shapes."""
