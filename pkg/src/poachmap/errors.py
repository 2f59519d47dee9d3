"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 for I/O, 2 for input validation, 3 for model or numeric failures.
"""


class PoachmapError(Exception):
    exit_code = 2


class ValidationError(PoachmapError, ValueError):
    exit_code = 2


class ModelError(PoachmapError, RuntimeError):
    exit_code = 3


# raster ingestion
class MalformedHeader(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonIntegerCode(ValidationError):
    pass


class UnmappedCode(ValidationError):
    def __init__(self, code):
        super().__init__(f"raster code {code} is not in the class map")
        self.code = code


class OutOfBounds(ValidationError, IndexError):
    pass


class IndivisibleDimensions(ValidationError):
    pass


# incidents and labels
class MalformedRow(ValidationError):
    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class OutOfExtent(ValidationError):
    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class EmptyIncidents(ValidationError):
    pass


# datasets
class TooFewRows(ValidationError):
    pass


class EmptySet(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class InvalidCount(ValidationError):
    pass


# scoring
class ZeroVarianceTargets(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


# models
class EmptyRows(ModelError):
    pass


class SingularSystem(ModelError):
    pass


class TooManyRows(ModelError):
    pass


class NonFiniteLoss(ModelError):
    pass


class UnfittedModel(ModelError):
    pass


class UnknownVersion(ModelError):
    pass


class CorruptModel(ModelError):
    pass


class ScalerMissing(ModelError):
    pass


class ScalerUnexpected(ModelError):
    pass
