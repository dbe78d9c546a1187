"""
Exceptions raised by the density estimation and benchmark code
"""

from typing import Optional


class XOKDEError(Exception):
    """Base class for all library errors"""


class SingularCovarianceError(XOKDEError, ValueError):
    """A covariance could not be factorized (non-finite or non-positive pivot)"""


class DimensionMismatchError(XOKDEError, ValueError):
    """A vector or component does not match the model dimension"""

    def __init__(self, expected: int, got: int, what: str = "sample"):
        self.expected = expected
        self.got = got
        super().__init__(f"{what} has dimension {got}, expected {expected}")


class BandwidthUnavailableError(XOKDEError, ValueError):
    """The model has too few effective samples for a bandwidth"""

    def __init__(self, n_eff: float, required: float):
        self.n_eff = n_eff
        self.required = required
        super().__init__(
            f"bandwidth undefined: effective sample count {n_eff:.6g} < {required:g}"
        )


class DatasetParseError(XOKDEError, ValueError):
    """A dataset file could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")


class ModelFormatError(XOKDEError, ValueError):
    """A model snapshot has an unknown format or version"""
