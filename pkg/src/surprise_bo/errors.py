"""Exception hierarchy shared by all modules."""


class SurpriseBoError(Exception):
    """Base class for every error raised by this package."""

    code = "error"


class DataError(SurpriseBoError):
    code = "data_error"


class SchemaError(DataError):
    """Input table does not declare the required columns."""

    code = "schema_error"


class EmptyDatasetError(DataError):
    """No rows survived cleaning."""

    code = "empty_dataset"


class ParseError(DataError):
    """A cell failed numeric parsing; carries its location."""

    code = "parse_error"

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class DegenerateScaleError(DataError):
    """A column is constant, so it cannot be standardized."""

    code = "degenerate_scale"

    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


class SplitError(DataError):
    code = "split_error"


class BudgetError(SurpriseBoError):
    """A requested draw or budget exceeds what the data can supply."""

    code = "budget_error"


class PoolExhaustedError(SurpriseBoError):
    code = "pool_exhausted"


class ShapeError(SurpriseBoError):
    code = "shape_error"


class DomainError(SurpriseBoError):
    """An argument is outside the mathematical domain of an operation."""

    code = "domain_error"


class ConditioningError(SurpriseBoError):
    """Kernel matrix stayed non-positive-definite through the jitter ladder."""

    code = "conditioning_error"


class InsufficientDataError(SurpriseBoError):
    code = "insufficient_data"


class CalibrationError(SurpriseBoError):
    """Surprise threshold calibration missing or under-sampled."""

    code = "calibration_error"


class ProtocolError(SurpriseBoError):
    """Campaign stepping contract violated (wrong ingest/acquire order)."""

    code = "protocol_error"


class AwaitingObservation(SurpriseBoError):
    """A suggestion is pending and no observed value was supplied."""

    code = "awaiting_observation"


class GanTrainingError(SurpriseBoError):
    code = "gan_training_error"

    def __init__(self, message: str, epoch: int | None = None):
        super().__init__(message)
        self.epoch = epoch


class SamplingError(SurpriseBoError):
    code = "sampling_error"


class NormalizerError(SurpriseBoError):
    code = "normalizer_error"


class AugmentationError(SurpriseBoError):
    """Not enough plausible synthetic rows to satisfy a request."""

    code = "augmentation_error"

    def __init__(self, message: str, shortfall: int | None = None):
        super().__init__(message)
        self.shortfall = shortfall


class ConfigError(SurpriseBoError):
    code = "config_error"
