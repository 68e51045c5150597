"""Exception hierarchy shared by every SAFE-QML package."""


class SafeQmlError(Exception):
    """Root of all errors raised by this project."""


# --- simulation -------------------------------------------------------------

class SimulationError(SafeQmlError):
    pass


class ZeroVector(SimulationError):
    """Amplitude encoding of a vector whose norm is (numerically) zero."""


class DimensionOverflow(SimulationError):
    """More input features than basis states."""


class QubitOutOfRange(SimulationError):
    pass


class ControlEqualsTarget(SimulationError):
    pass


class InvalidStateVector(SimulationError):
    pass


class InvalidRotationParams(SimulationError):
    pass


# --- models -----------------------------------------------------------------

class ModelError(SafeQmlError):
    pass


class ShapeMismatch(ModelError):
    pass


class EmptyDataset(ModelError):
    pass


class NonDifferentiableModel(ModelError):
    pass


class CheckpointError(ModelError):
    pass


# --- metrics ----------------------------------------------------------------

class MetricError(SafeQmlError):
    pass


class EmptyInput(MetricError):
    pass


class NonPositiveMean(MetricError):
    pass


class ConstantReference(MetricError):
    """Reference values are constant, so no ranking can be graded against them."""


class SingleClassSplit(MetricError):
    pass


class DegenerateGrid(MetricError):
    pass


# --- data and configuration -------------------------------------------------

class DataError(SafeQmlError):
    pass


class MalformedHeader(DataError):
    pass


class MalformedRow(DataError):
    def __init__(self, line: int, detail: str):
        self.line = line
        self.detail = detail
        super().__init__(f"malformed row at line {line}: {detail}")

    def __reduce__(self):
        return (MalformedRow, (self.line, self.detail))


class NonNumericCell(DataError):
    def __init__(self, row: int, col: int, value: object = None):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"non-numeric cell at row {row}, column {col}: {value!r}")

    def __reduce__(self):
        return (NonNumericCell, (self.row, self.col, self.value))


class LabelOutOfRange(DataError):
    def __init__(self, label: object, row: int | None = None, n_classes: int | None = None):
        self.label = label
        self.row = row
        self.n_classes = n_classes
        where = f" at row {row}" if row is not None else ""
        bound = f" (n_classes={n_classes})" if n_classes is not None else ""
        super().__init__(f"label {label!r} out of range{where}{bound}")

    def __reduce__(self):
        return (LabelOutOfRange, (self.label, self.row, self.n_classes))


class EmptyFile(DataError):
    pass


class InvalidSpec(DataError):
    pass


class InvalidDataset(DataError):
    pass


class ClassTooSmall(DataError):
    pass


class ConfigError(SafeQmlError):
    pass


class IoFailure(SafeQmlError):
    pass


# --- experiment -------------------------------------------------------------

class ExperimentError(SafeQmlError):
    pass


class FoldFailure(ExperimentError):
    def __init__(self, fold: int, cause: BaseException):
        self.fold = fold
        self.cause = cause
        super().__init__(f"fold {fold} failed: {type(cause).__name__}: {cause}")

    def __reduce__(self):
        return (FoldFailure, (self.fold, self.cause))
