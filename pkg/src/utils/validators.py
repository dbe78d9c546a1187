"""
Data Validators - Functions to validate configuration values and sample vectors
"""

from typing import Any, Optional, Tuple, Union

import numpy as np

from src.utils.constants import LABEL_COLUMN_ALIASES
from src.utils.exceptions import DimensionMismatchError


class DataValidator:
    """Class containing various data validation methods"""

    @staticmethod
    def validate_required(value: Any, field_name: str = "Field") -> Tuple[bool, str]:
        """Validate that a field is not empty"""
        if value is None:
            return False, f"{field_name} is required"

        if isinstance(value, str) and not value.strip():
            return False, f"{field_name} cannot be empty"

        return True, ""

    @staticmethod
    def validate_number_range(value: Union[int, float], min_val: Optional[float] = None,
                              max_val: Optional[float] = None, field_name: str = "Value",
                              min_exclusive: bool = False) -> Tuple[bool, str]:
        """Validate number within range"""
        try:
            num_value = float(value)
        except (TypeError, ValueError):
            return False, f"{field_name} must be a valid number"

        if not np.isfinite(num_value):
            return False, f"{field_name} must be finite"

        if min_val is not None:
            if min_exclusive and num_value <= min_val:
                return False, f"{field_name} must be greater than {min_val}"
            if num_value < min_val:
                return False, f"{field_name} must be at least {min_val}"

        if max_val is not None and num_value > max_val:
            return False, f"{field_name} cannot exceed {max_val}"

        return True, ""

    @staticmethod
    def validate_integer(value: Any, min_val: Optional[int] = None, field_name: str = "Value") -> Tuple[bool, str]:
        """Validate a whole number with an optional lower bound"""
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            return False, f"{field_name} must be an integer"

        if min_val is not None and value < min_val:
            return False, f"{field_name} must be at least {min_val}"

        return True, ""

    @staticmethod
    def validate_label_column(value: Union[str, int]) -> Tuple[bool, str]:
        """Validate a label column selector: 'first', 'last' or an integer index"""
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return True, ""

        text = str(value).strip().lower()
        if text in LABEL_COLUMN_ALIASES:
            return True, ""

        try:
            int(text)
        except ValueError:
            return False, "Label column must be 'first', 'last' or an integer index"

        return True, ""


def as_points(x: Any, dim: int) -> Tuple[np.ndarray, bool]:
    """Coerce a point or an (m, d) batch to a 2-D array; the flag is True for a single point"""
    points = np.asarray(x, dtype=float)
    single = points.ndim == 1
    points = np.atleast_2d(points)

    if points.ndim != 2 or points.shape[1] != dim:
        got = points.shape[-1] if points.ndim >= 1 else 0
        raise DimensionMismatchError(dim, got, "point")

    return points, single


def as_sample_vector(x: Any, dim: int) -> np.ndarray:
    """Validate one observation: a finite vector of length ``dim``"""
    vector = np.asarray(x, dtype=float)
    if vector.ndim != 1:
        vector = vector.reshape(-1)

    if vector.size != dim:
        raise DimensionMismatchError(dim, vector.size)

    if not np.all(np.isfinite(vector)):
        raise ValueError("Sample contains non-finite values")

    return vector
