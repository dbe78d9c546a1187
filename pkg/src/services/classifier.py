"""
Bayes Classifier Service - one online KDE per class with empirical priors
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Optional, Sequence

import numpy as np

from src.models.sample_model import EngineConfig
from src.services.okde_engine import OnlineKDE
from src.utils.exceptions import BandwidthUnavailableError, DimensionMismatchError
from src.utils.validators import as_points


@dataclass
class NLLSummary:
    """Average negative log-likelihood over the evaluable test samples"""

    mean: Optional[float]
    evaluated: int
    excluded: int = 0
    excluded_labels: List[str] = field(default_factory=list)


class BayesClassifier:
    """Generative classifier: argmax_c ln p(x | c) + ln P(c)"""

    def __init__(self, engine_config: Optional[EngineConfig] = None):
        self.logger = logging.getLogger(__name__)
        self.config = engine_config or EngineConfig()
        self.models: Dict[Hashable, OnlineKDE] = {}
        self.counts: Dict[Hashable, int] = {}
        self.dim: Optional[int] = None

    @property
    def labels(self) -> List[Hashable]:
        """Class labels in deterministic order"""
        return sorted(self.models, key=str)

    @property
    def total_observed(self) -> int:
        return sum(self.counts.values())

    def observe(self, x: Any, label: Hashable) -> None:
        """Route one labeled observation to its class model"""
        vector = np.asarray(x, dtype=float).reshape(-1)
        if self.dim is None:
            self.dim = int(vector.size)
        elif vector.size != self.dim:
            raise DimensionMismatchError(self.dim, vector.size)

        if label not in self.models:
            self.models[label] = OnlineKDE(self.dim, self.config)
            self.counts[label] = 0
            self.logger.debug(f"New class {label!r}")

        self.models[label].add_sample(vector)
        self.counts[label] += 1

    def observe_many(self, samples: Any, labels: Sequence[Hashable]) -> None:
        """Observe rows of ``samples`` with matching labels, in order"""
        samples = np.atleast_2d(np.asarray(samples, dtype=float))
        if samples.shape[0] != len(labels):
            raise ValueError(f"{samples.shape[0]} samples but {len(labels)} labels")
        for row, label in zip(samples, labels):
            self.observe(row, label)

    def priors(self) -> Dict[Hashable, float]:
        """Empirical class frequencies"""
        total = self.total_observed
        if total == 0:
            return {}
        return {label: self.counts[label] / total for label in self.labels}

    def _score_matrix(self, points: np.ndarray) -> np.ndarray:
        """(m, C) matrix of log-likelihood plus log-prior; unusable classes score -inf"""
        priors = self.priors()
        scores = np.full((points.shape[0], len(self.models)), -np.inf)

        for j, label in enumerate(self.labels):
            try:
                scores[:, j] = self.models[label].log_likelihood(points) + np.log(priors[label])
            except BandwidthUnavailableError as e:
                self.logger.warning(f"Class {label!r} cannot be scored: {str(e)}")

        return scores

    def class_scores(self, x: Any) -> Dict[Hashable, float]:
        """Per-class score of one point"""
        if not self.models:
            raise ValueError("Classifier has not observed any sample")
        points, _ = as_points(x, self.dim)
        row = self._score_matrix(points)[0]
        return {label: float(score) for label, score in zip(self.labels, row)}

    def predict(self, x: Any) -> Hashable:
        """Most probable class; ties go to the first label in sorted order"""
        return self.predict_many(np.atleast_2d(np.asarray(x, dtype=float)))[0]

    def predict_many(self, samples: Any) -> List[Hashable]:
        """Predicted label for every row"""
        if not self.models:
            raise ValueError("Classifier has not observed any sample")
        points, _ = as_points(samples, self.dim)
        labels = self.labels
        return [labels[j] for j in np.argmax(self._score_matrix(points), axis=1)]

    def evaluate_nll(self, samples: Any, labels: Sequence[Hashable]) -> NLLSummary:
        """Mean of -ln p(x | true class) over test samples whose class can be evaluated"""
        points, _ = as_points(samples, self.dim)
        labels = list(labels)
        if points.shape[0] != len(labels):
            raise ValueError(f"{points.shape[0]} samples but {len(labels)} labels")

        values: List[np.ndarray] = []
        excluded = 0
        excluded_labels = set()

        for label in sorted(set(labels), key=str):
            mask = np.array([l == label for l in labels])
            model = self.models.get(label)
            if model is None or not model.can_estimate():
                excluded += int(np.sum(mask))
                excluded_labels.add(str(label))
                continue
            values.append(-model.log_likelihood(points[mask]))

        if excluded_labels:
            self.logger.warning(f"Excluded {excluded} test samples of classes {sorted(excluded_labels)} from NLL")

        if not values:
            return NLLSummary(None, 0, excluded, sorted(excluded_labels))

        stacked = np.concatenate(values)
        return NLLSummary(float(np.mean(stacked)), int(stacked.size), excluded, sorted(excluded_labels))

    def avg_neg_log_likelihood(self, samples: Any, labels: Sequence[Hashable]) -> Optional[float]:
        return self.evaluate_nll(samples, labels).mean

    def compress_models(self) -> int:
        """Compress every class model that has a bandwidth; returns the total component count"""
        for label in self.labels:
            model = self.models[label]
            if model.can_estimate():
                model.compress()
        return sum(m.n_components for m in self.models.values())

    def mean_components(self) -> float:
        """Average component count over class models"""
        if not self.models:
            return 0.0
        return float(np.mean([m.n_components for m in self.models.values()]))

    def footprint_bytes(self) -> int:
        return sum(m.footprint_bytes() for m in self.models.values())

    def to_dict(self) -> Dict[str, Any]:
        """Per-class snapshots; labels are stored as strings"""
        return {
            'dim': self.dim,
            'config': self.config.to_dict(),
            'classes': [
                {'label': str(label), 'count': self.counts[label], 'model': self.models[label].to_dict()}
                for label in self.labels
            ]
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BayesClassifier':
        classifier = cls(EngineConfig.from_dict(data['config']))
        classifier.dim = data['dim']
        for entry in data['classes']:
            classifier.models[entry['label']] = OnlineKDE.from_dict(entry['model'])
            classifier.counts[entry['label']] = int(entry['count'])
        return classifier
