"""
Tests for validators, formatters and helper functions
"""

import numpy as np
import pytest

from src.utils.exceptions import DatasetParseError, DimensionMismatchError
from src.utils.formatters import DataFormatter
from src.utils.helpers import calculate_statistics, finite_or_none
from src.utils.validators import DataValidator, as_points, as_sample_vector


class TestDataValidator:

    def test_number_range(self):
        assert DataValidator.validate_number_range(0.5, 0.0, 1.0)[0]
        assert not DataValidator.validate_number_range(0.0, 0.0, 1.0, min_exclusive=True)[0]
        assert not DataValidator.validate_number_range(float("nan"))[0]
        assert not DataValidator.validate_number_range("abc")[0]

    def test_integer_excludes_bool(self):
        assert DataValidator.validate_integer(3, 1)[0]
        assert not DataValidator.validate_integer(True)[0]
        assert not DataValidator.validate_integer(2.0)[0]

    @pytest.mark.parametrize("value,ok", [("last", True), ("FIRST", True), (2, True), ("-1", True), ("mid", False)])
    def test_label_column(self, value, ok):
        assert DataValidator.validate_label_column(value)[0] is ok


class TestPointCoercion:

    def test_single_point_flag(self):
        points, single = as_points([1.0, 2.0], 2)
        assert single and points.shape == (1, 2)

    def test_batch(self):
        points, single = as_points(np.zeros((3, 2)), 2)
        assert not single and points.shape == (3, 2)

    def test_wrong_width(self):
        with pytest.raises(DimensionMismatchError) as excinfo:
            as_points(np.zeros((3, 4)), 2)
        assert (excinfo.value.expected, excinfo.value.got) == (2, 4)

    def test_sample_vector_rejects_infinity(self):
        with pytest.raises(ValueError):
            as_sample_vector([np.inf, 0.0], 2)


class TestFormatters:

    def test_mean_std(self):
        assert DataFormatter.format_mean_std(95.0, 1.25) == "95.00 ± 1.25"
        assert DataFormatter.format_mean_std(None, None) == "n/a"

    def test_file_size(self):
        assert DataFormatter.format_file_size(512) == "512 B"
        assert DataFormatter.format_file_size(2048) == "2.0 KB"

    def test_duration(self):
        assert DataFormatter.format_duration(0.25) == "250ms"
        assert DataFormatter.format_duration(90) == "1m 30s"


class TestHelpers:

    def test_statistics_use_sample_std(self):
        stats = calculate_statistics([1.0, 2.0, 3.0])
        assert stats['mean'] == 2.0
        assert stats['std_dev'] == pytest.approx(1.0)

    def test_statistics_of_nothing(self):
        assert calculate_statistics([]) == {}

    def test_finite_or_none(self):
        assert finite_or_none(float("nan")) is None
        assert finite_or_none(1.5) == 1.5


class TestExceptions:

    def test_parse_error_location(self):
        error = DatasetParseError("bad value", line=4, column=2)
        assert str(error) == "line 4, column 2: bad value"
        assert isinstance(error, ValueError)
