"""Exception hierarchy shared by all detection modules.

Two branches matter to callers: ``ConfigError`` for bad parameters (the CLI
maps it to exit code 2) and ``DataError`` for defective input data (exit
code 3). Everything else derives from one of the two.
"""


class PanelOutliersError(Exception):
    """Base class for all package errors."""


class ConfigError(PanelOutliersError):
    """A tuning parameter is out of its valid range or inconsistent."""


class DataError(PanelOutliersError):
    """Input data cannot be used as provided."""


# --- ingest ---------------------------------------------------------------

class MissingColumnError(DataError):
    """A named CSV column is not present in the header."""


class DuplicateUnitError(DataError):
    """The same unit id occurs on more than one row."""


class NegativeValueError(DataError):
    """A numeric cell is negative; observed values must be >= 0."""


class ValueParseError(DataError):
    """A cell is neither numeric nor a recognised missing-value token."""


class EmptyRatioSetError(DataError):
    """No unit has both occasions present and strictly positive."""


# --- score computations ---------------------------------------------------

class EmptyInputError(DataError):
    """An operation received an empty score vector."""


class TooFewPointsError(DataError):
    """An operation needs more observations than were supplied."""


class KTooLargeError(ConfigError):
    """Neighbour count k must be smaller than the number of units."""


class QTooSmallError(ConfigError):
    """Subsample size q must be at least 2."""


class DegenerateVectorError(DataError):
    """Rank correlation is undefined because a vector is constant."""
