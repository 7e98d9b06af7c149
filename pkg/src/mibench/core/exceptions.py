from typing import Any, Iterable, Optional


class MibenchError(Exception):
    """
    Base class for every error raised by mibench. `exit_code` is what the CLI returns.
    """
    exit_code = 1


# --- configuration ---

class ConfigError(MibenchError):
    """
    Exception to signal an unknown key, a malformed line or a value of the wrong type.
    """
    exit_code = 1

    def __init__(self, message: str, line_no: Optional[int] = None, key: Optional[str] = None):
        self.line_no = line_no
        self.key = key
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class InvalidParameterError(MibenchError, ValueError):
    """
    Exception to signal an invalid argument to one of the pure signal/feature/model operations.
    """
    exit_code = 1


class WindowUnderflowError(InvalidParameterError):
    """
    The requested head/tail drops leave no samples in the task window.
    """
    pass


class FilterDesignError(InvalidParameterError):
    """
    Band edges or filter order cannot produce a valid band-pass design.
    """
    pass


class SamplingRateMismatchError(InvalidParameterError):
    """
    An epoch and a filter were built for different sampling rates.
    """
    pass


class EmptyBandError(InvalidParameterError):
    """
    The pooling band selects no periodogram bins.
    """
    pass


# --- data ---

class DataError(MibenchError):
    """
    Exception to signal unreadable or inconsistent trial data.
    """
    exit_code = 2


class TrialFormatError(DataError):
    """
    A trial file does not follow the binary interchange format.
    """
    pass


class ManifestError(DataError):
    """
    The manifest CSV is missing, malformed or references bad entries.
    """
    pass


class TrialCoverageError(DataError):
    """
    A stored trial does not cover the task window the protocol asks for.
    """
    pass


class ChannelLookupError(DataError, LookupError):
    """
    One or more requested channel names do not exist in the trial set.
    """

    def __init__(self, names: Iterable[str]):
        self.names = list(names)
        super().__init__(f"Unknown channel name(s): {', '.join(self.names)}")


class DimensionMismatchError(DataError, ValueError):
    """
    Vectors, masks or models disagree on dimensionality.
    """
    pass


# --- feature selection ---

class SelectionError(MibenchError):
    """
    Feature selection could not run on the given samples.
    """
    exit_code = 3


class SingleClassError(SelectionError):
    """
    Only one class is present where two are required.
    """
    pass


class InsufficientSampleError(SelectionError, ValueError):
    """
    A t-test sample holds fewer than two points.
    """
    pass


# --- training ---

class TrainingError(MibenchError):
    """
    A classifier could not be fitted. Evaluation records these per repetition.
    """
    exit_code = 3


class MissingClassError(TrainingError):
    """
    The training set lacks one of the two classes.
    """
    pass


class EmptyFeatureSpaceError(TrainingError):
    """
    The training vectors have zero features (e.g. nothing passed the t-test threshold).
    """
    pass


class NonFiniteInputError(TrainingError):
    """
    Training data contains NaN or infinite values.
    """
    pass


class SingularCovarianceError(TrainingError):
    """
    The regularised pooled covariance is not positive definite.
    """
    pass


class ConvergenceError(TrainingError):
    """
    The SVM solver exhausted its iteration budget.
    """

    def __init__(self, message: str, iterations: int):
        self.iterations = iterations
        super().__init__(f"{message} (after {iterations} iterations)")


# --- evaluation ---

class EvaluationError(MibenchError):
    """
    Base class for protocol-level failures.
    """
    exit_code = 3


class CellFailedError(EvaluationError):
    """
    Too many repetitions of one experiment cell failed. `summary` holds the partial result.
    """

    def __init__(self, message: str, summary: Any = None):
        self.summary = summary
        super().__init__(message)
