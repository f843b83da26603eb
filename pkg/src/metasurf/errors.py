"""Exception hierarchy shared across the package."""


class MetaSurfError(Exception):
    """Base class for all metasurf errors."""


class EmptyTable(MetaSurfError):
    """A study table with zero rows was passed where data is required."""


class NonPositiveSE(MetaSurfError):
    """A study reports a standard error that is not a positive finite number."""


class InvalidStudy(MetaSurfError):
    """A study violates a basic invariant (non-finite effect, unknown ordinal
    level, inconsistent covariate columns)."""


class MixedQualityScales(MetaSurfError):
    """Numeric and ordinal quality mixed in one table, or two different
    ordinal scales."""


class TooFewStudies(MetaSurfError):
    """Fewer studies than the estimator needs."""


class OrdinalQualityUnsupported(MetaSurfError):
    """A numeric-quality operation (e.g. thresholding) was applied to an
    ordinal table."""


class EncodingMismatch(MetaSurfError):
    """Encoding, ideal point and table quality kind do not agree."""


class RankDeficient(MetaSurfError):
    """The weighted design matrix is (numerically) rank deficient."""


class ParseError(MetaSurfError):
    """A CSV cell could not be parsed; carries file coordinates."""

    def __init__(self, row: int, column: str, reason: str):
        self.row = row
        self.column = column
        self.reason = reason
        super().__init__(f"row {row}, column '{column}': {reason}")


class SchemaError(MetaSurfError):
    """The file or config structure is wrong (missing/duplicate columns,
    unknown keys)."""
