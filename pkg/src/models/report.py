"""
Report Data Model - Defines datasets, experiment configuration and benchmark reports
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Union

import numpy as np

import config
from src.models.gaussian import CovarianceKind
from src.models.sample_model import EngineConfig
from src.utils.constants import METRIC_FIELDS, TIMING_FIELDS
from src.utils.helpers import calculate_statistics
from src.utils.validators import DataValidator


class ReportFormat(Enum):
    """Report format enumeration"""
    JSON = "json"
    CSV = "csv"


class ShuffleStatus(Enum):
    """Outcome of one shuffle"""
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass(eq=False)
class Dataset:
    """Labeled vector dataset"""

    name: str
    samples: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        self.labels = np.asarray(self.labels, dtype=object).reshape(-1)

        if self.samples.shape[0] != self.labels.size:
            raise ValueError(f"{self.samples.shape[0]} samples but {self.labels.size} labels")

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def dim(self) -> int:
        return int(self.samples.shape[1])

    @property
    def classes(self) -> List[Any]:
        return sorted(set(self.labels.tolist()), key=str)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def subset(self, indices: np.ndarray) -> 'Dataset':
        """Rows in the given order"""
        return Dataset(self.name, self.samples[indices], self.labels[indices])


@dataclass
class ExperimentConfig:
    """One benchmark run: dataset, engine parameters and protocol"""

    dataset_path: str = ""
    covariance: CovarianceKind = CovarianceKind.parse(config.ENGINE_CONFIG["COVARIANCE"])
    shuffles: int = config.BENCH_CONFIG["SHUFFLES"]
    train_fraction: float = config.BENCH_CONFIG["TRAIN_FRACTION"]
    seed: int = config.BENCH_CONFIG["SEED"]
    d_th: float = config.ENGINE_CONFIG["D_TH"]
    forgetting: float = config.ENGINE_CONFIG["FORGETTING"]
    trigger_floor: int = config.ENGINE_CONFIG["TRIGGER_FLOOR"]
    trigger_growth: float = config.ENGINE_CONFIG["TRIGGER_GROWTH"]
    revitalize: bool = config.ENGINE_CONFIG["REVITALIZE"]
    output_format: ReportFormat = ReportFormat(config.BENCH_CONFIG["OUTPUT_FORMAT"])
    label_column: Union[str, int] = config.BENCH_CONFIG["LABEL_COLUMN"]
    skip_header: bool = False
    delimiter: str = config.BENCH_CONFIG["DELIMITER"]
    jobs: int = config.BENCH_CONFIG["JOBS"]
    record_memory: bool = False
    final_compress: bool = config.BENCH_CONFIG["FINAL_COMPRESS"]

    def __post_init__(self):
        self.covariance = CovarianceKind.parse(self.covariance)
        self.output_format = ReportFormat(str(getattr(self.output_format, 'value', self.output_format)).lower())

        is_valid, message = DataValidator.validate_label_column(self.label_column)
        if not is_valid:
            raise ValueError(message)
        if isinstance(self.label_column, str) and self.label_column.strip().lower() not in ('first', 'last'):
            self.label_column = int(self.label_column)
        elif isinstance(self.label_column, str):
            self.label_column = self.label_column.strip().lower()

        checks = [
            DataValidator.validate_integer(self.shuffles, 1, "Shuffles"),
            DataValidator.validate_number_range(self.train_fraction, 0.0, None, "Train fraction", min_exclusive=True),
            DataValidator.validate_integer(self.seed, 0, "Seed"),
            DataValidator.validate_integer(self.jobs, 1, "Jobs"),
            DataValidator.validate_required(self.delimiter, "Delimiter")
        ]
        for is_valid, message in checks:
            if not is_valid:
                raise ValueError(message)

        if self.train_fraction >= 1.0:
            raise ValueError("Train fraction must be less than 1")

        # raises on invalid engine parameters
        self.engine_config()

    def engine_config(self) -> EngineConfig:
        return EngineConfig(
            d_th=self.d_th,
            forgetting=self.forgetting,
            covariance=self.covariance,
            trigger_floor=self.trigger_floor,
            trigger_growth=self.trigger_growth,
            revitalize=self.revitalize
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            'dataset_path': self.dataset_path,
            'covariance': self.covariance.value,
            'shuffles': self.shuffles,
            'train_fraction': self.train_fraction,
            'seed': self.seed,
            'd_th': self.d_th,
            'forgetting': self.forgetting,
            'trigger_floor': self.trigger_floor,
            'trigger_growth': self.trigger_growth,
            'revitalize': self.revitalize,
            'output_format': self.output_format.value,
            'label_column': self.label_column,
            'skip_header': self.skip_header,
            'delimiter': self.delimiter,
            'jobs': self.jobs,
            'record_memory': self.record_memory,
            'final_compress': self.final_compress
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        """Create config from dictionary"""
        return cls(**data)


@dataclass
class ShuffleResult:
    """Metrics of one shuffle; failed shuffles carry only the error"""

    index: int
    status: ShuffleStatus = ShuffleStatus.COMPLETED
    n_train: int = 0
    n_test: int = 0
    accuracy: Optional[float] = None
    avg_nll: Optional[float] = None
    mean_components: Optional[float] = None
    train_seconds: Optional[float] = None
    test_seconds: Optional[float] = None
    footprint_bytes: Optional[int] = None
    rss_mb: Optional[float] = None
    excluded_labels: List[str] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def completed(self) -> bool:
        return self.status is ShuffleStatus.COMPLETED

    def metric(self, name: str) -> Optional[float]:
        return getattr(self, name)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            'index': self.index,
            'status': self.status.value,
            'n_train': self.n_train,
            'n_test': self.n_test,
            'accuracy': self.accuracy,
            'avg_nll': self.avg_nll,
            'mean_components': self.mean_components,
            'train_seconds': self.train_seconds,
            'test_seconds': self.test_seconds,
            'footprint_bytes': self.footprint_bytes,
            'rss_mb': self.rss_mb,
            'excluded_labels': list(self.excluded_labels),
            'error': self.error
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ShuffleResult':
        """Create result from dictionary"""
        values = dict(data)
        values['status'] = ShuffleStatus(values['status'])
        values['excluded_labels'] = list(values.get('excluded_labels') or [])
        return cls(**values)


@dataclass
class ExperimentReport:
    """Per-shuffle rows of one experiment plus derived aggregates"""

    dataset: str
    n_samples: int
    dim: int
    n_classes: int
    config: ExperimentConfig
    shuffles: List[ShuffleResult] = field(default_factory=list)

    @property
    def completed(self) -> List[ShuffleResult]:
        return [s for s in self.shuffles if s.completed]

    @property
    def failed(self) -> List[ShuffleResult]:
        return [s for s in self.shuffles if not s.completed]

    def aggregate(self) -> Dict[str, Dict[str, Optional[float]]]:
        """Mean and sample standard deviation of every metric over completed shuffles"""
        means: Dict[str, Optional[float]] = {}
        stds: Dict[str, Optional[float]] = {}

        for name in METRIC_FIELDS:
            values = [s.metric(name) for s in self.completed if s.metric(name) is not None]
            stats = calculate_statistics(values)
            means[name] = stats.get('mean')
            stds[name] = stats.get('std_dev')

        return {'mean': means, 'std': stds}

    def without_timing(self) -> 'ExperimentReport':
        """Copy with machine-dependent fields cleared, for byte-comparable reports"""
        cleared = {name: None for name in TIMING_FIELDS}
        return replace(self, shuffles=[replace(s, **cleared) for s in self.shuffles])

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            'dataset': {
                'name': self.dataset,
                'n_samples': self.n_samples,
                'dim': self.dim,
                'n_classes': self.n_classes
            },
            'config': self.config.to_dict(),
            'shuffles': [s.to_dict() for s in self.shuffles],
            'aggregate': self.aggregate(),
            'completed': len(self.completed),
            'failed': len(self.failed)
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentReport':
        """Create report from dictionary; aggregates are recomputed"""
        dataset = data['dataset']
        return cls(
            dataset=dataset['name'],
            n_samples=int(dataset['n_samples']),
            dim=int(dataset['dim']),
            n_classes=int(dataset['n_classes']),
            config=ExperimentConfig.from_dict(data['config']),
            shuffles=[ShuffleResult.from_dict(s) for s in data['shuffles']]
        )
