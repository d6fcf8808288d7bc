"""Exception hierarchy shared by all workcast modules."""


class WorkcastError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(WorkcastError):
    """A required column is missing from a log source or column mapping."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"missing mandatory column: {column!r}")


class EmptyLogError(WorkcastError):
    """The log source contains no data rows."""


class EmptySeriesError(WorkcastError):
    """No events match the requested article type / business unit."""


class DegenerateWindowError(WorkcastError):
    """Smoothing window is too large for the series."""


class InvalidSpanError(WorkcastError):
    """Exponential smoothing span must be a positive odd integer."""


class AlignmentError(WorkcastError):
    """Feature rows and series cover different periods."""


class SeriesTooShortError(WorkcastError):
    """Series has fewer observations than the training window requires."""


class DivergenceError(WorkcastError):
    """Training loss became non-finite."""

    def __init__(self, epoch: int):
        self.epoch = epoch
        super().__init__(f"training diverged (non-finite loss) at epoch {epoch}")


class ModelFormatError(WorkcastError):
    """A persisted model artifact cannot be decoded."""


class ModelVersionError(ModelFormatError):
    """A persisted model artifact uses an unsupported format version."""

    def __init__(self, found: int, supported: int):
        self.found = found
        self.supported = supported
        super().__init__(
            f"model artifact format version {found} is not supported "
            f"(this build reads version {supported})"
        )


class UnknownArticleTypeError(WorkcastError):
    """Requested article type is absent from the catalog or model registry."""


class NoHistoryError(WorkcastError):
    """A running order's article type has no historical traces to replay."""


class UndefinedMetricError(WorkcastError):
    """Metric is undefined for the given inputs (e.g. MAPE with all-zero actuals)."""


class MissingModelError(WorkcastError):
    """No trained model is available for a requested article type."""

    def __init__(self, article_type: str):
        self.article_type = article_type
        super().__init__(f"no trained model for article type {article_type!r}")
