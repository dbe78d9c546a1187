"""
Dataset Loader Service - Reads labeled numeric CSV files and produces seeded train/test splits
"""

import logging
import re
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

import config
from src.models.report import Dataset
from src.utils.constants import ERROR_MESSAGES, KNOWN_DATASETS
from src.utils.exceptions import DatasetParseError

_LINE_PATTERN = re.compile(r"line (\d+)")


class DatasetLoader:
    """Service class for dataset file operations"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def file_exists(self, path: Union[str, Path]) -> bool:
        """Check if the dataset file exists"""
        try:
            path = Path(path)
            return path.exists() and path.is_file()
        except OSError as e:
            self.logger.error(f"Error checking file existence: {str(e)}")
            return False

    def _read_raw(self, path: Path, delimiter: str) -> pd.DataFrame:
        """Read every field as text, keeping blank lines so row positions equal line numbers"""
        try:
            return pd.read_csv(
                path,
                header=None,
                sep=delimiter,
                dtype=str,
                keep_default_na=False,
                skip_blank_lines=False,
                skipinitialspace=True
            )
        except pd.errors.EmptyDataError as e:
            raise DatasetParseError(ERROR_MESSAGES['EMPTY_FILE']) from e
        except pd.errors.ParserError as e:
            match = _LINE_PATTERN.search(str(e))
            line = int(match.group(1)) if match else None
            raise DatasetParseError(f"Inconsistent column count: {str(e).strip()}", line=line) from e

    @staticmethod
    def resolve_label_column(label_column: Union[str, int], n_columns: int) -> int:
        """Turn 'first', 'last' or a (possibly negative) index into a column position"""
        if isinstance(label_column, str):
            selector = label_column.strip().lower()
            if selector == 'last':
                return n_columns - 1
            if selector == 'first':
                return 0
            label_column = int(selector)

        position = label_column + n_columns if label_column < 0 else label_column
        if not 0 <= position < n_columns:
            raise DatasetParseError(f"Label column {label_column} is outside the {n_columns} columns")
        return position

    def load_csv(self, path: Union[str, Path], label_column: Union[str, int] = config.BENCH_CONFIG["LABEL_COLUMN"],
                 skip_header: bool = False, delimiter: str = config.BENCH_CONFIG["DELIMITER"],
                 name: Optional[str] = None) -> Dataset:
        """Load a delimiter-separated file with one label column and numeric features"""
        path = Path(path)
        if not self.file_exists(path):
            raise FileNotFoundError(ERROR_MESSAGES['FILE_NOT_FOUND'].format(path=path))

        raw = self._read_raw(path, delimiter)
        raw.index = np.arange(1, len(raw) + 1)

        if skip_header and len(raw) > 0:
            raw = raw.iloc[1:]

        blank = raw.apply(lambda column: column.isna() | (column.str.strip() == "")).all(axis=1)
        raw = raw[~blank]
        if raw.empty:
            raise DatasetParseError(ERROR_MESSAGES['EMPTY_FILE'])

        n_columns = raw.shape[1]
        if n_columns < 2:
            raise DatasetParseError(ERROR_MESSAGES['NO_FEATURES'], line=int(raw.index[0]))

        short_rows = raw.isna().any(axis=1)
        if short_rows.any():
            line = int(raw.index[short_rows.to_numpy().argmax()])
            got = int(raw.loc[line].notna().sum())
            raise DatasetParseError(ERROR_MESSAGES['RAGGED_ROW'].format(got=got, expected=n_columns), line=line)

        label_position = self.resolve_label_column(label_column, n_columns)
        feature_positions = [c for c in range(n_columns) if c != label_position]

        features = np.empty((len(raw), len(feature_positions)))
        for j, position in enumerate(feature_positions):
            text = raw.iloc[:, position].str.strip()
            numbers = pd.to_numeric(text, errors='coerce').to_numpy(dtype=float)
            bad = ~np.isfinite(numbers)
            if bad.any():
                row = int(bad.argmax())
                raise DatasetParseError(
                    ERROR_MESSAGES['NOT_NUMERIC'].format(value=text.iloc[row]),
                    line=int(raw.index[row]),
                    column=position + 1
                )
            features[:, j] = numbers

        labels = raw.iloc[:, label_position].str.strip().to_numpy(dtype=object)
        dataset = Dataset(name or path.stem, features, labels)

        self.logger.info(f"Loaded {dataset.name}: {dataset.n_samples} samples, "
                         f"{dataset.dim} dimensions, {dataset.n_classes} classes")
        self.check_known_shape(dataset)
        return dataset

    def check_known_shape(self, dataset: Dataset) -> bool:
        """Warn when a file named after a known benchmark dataset has another shape"""
        expected = KNOWN_DATASETS.get(dataset.name.lower())
        if expected is None:
            return True

        actual = (dataset.n_samples, dataset.dim, dataset.n_classes)
        if actual != expected:
            self.logger.warning(f"Dataset {dataset.name} has shape {actual}, expected {expected}")
            return False
        return True


def shuffle_split(dataset: Dataset, seed: Union[int, np.random.SeedSequence],
                  fraction: float) -> Tuple[Dataset, Dataset]:
    """Seeded uniform permutation; the first floor(fraction * N) rows train, the rest test"""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"Train fraction must be in (0, 1), got {fraction}")

    rng = np.random.default_rng(seed)
    order = rng.permutation(dataset.n_samples)
    n_train = int(np.floor(fraction * dataset.n_samples))
    return dataset.subset(order[:n_train]), dataset.subset(order[n_train:])
