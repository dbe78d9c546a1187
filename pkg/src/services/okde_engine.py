"""
Online KDE Engine - incremental updates, compression, revitalization and model snapshots
"""

import json
import logging
import threading
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

import config
from src.models.gaussian import CovarianceMatrix, GaussianComponent
from src.models.mixture import Mixture
from src.models.sample_model import BandwidthState, CompressionResult, EngineConfig, SampleModel
from src.services.bandwidth import estimate_bandwidth
from src.services.gauss_core import correct_covariance, factorize_component
from src.services.mixture_ops import (goldberger_split, hellinger, mixture_log_pdf, moment_match,
                                      principal_split)
from src.utils.exceptions import ModelFormatError, SingularCovarianceError
from src.utils.validators import as_points, as_sample_vector

# A component of the working list during compression: whitened component,
# whitened detailed model, and the index of the untouched original (or None)
_Entry = Tuple[GaussianComponent, Mixture, Optional[int]]


def local_error(sub: Mixture, bandwidth: CovarianceMatrix) -> float:
    """Hellinger distance between a smoothed sub-mixture and its smoothed moment match"""
    if len(sub) <= 1:
        return 0.0

    normalized = sub.normalized()
    merged = moment_match(normalized).with_weight(1.0)
    single = Mixture([merged], normalized.dim, normalized.kind)
    return hellinger(normalized.convolved(bandwidth), single.convolved(bandwidth))


def initial_detailed_model(component: GaussianComponent) -> Mixture:
    """Detailed model for a component that has none: itself if a delta, else its two-way split"""
    if component.is_dirac:
        return Mixture([component.with_weight(1.0)], component.dim, component.kind)
    return principal_split(component).normalize()


class OnlineKDE:
    """Online kernel density estimator over a stream of d-dimensional samples"""

    def __init__(self, dim: int, engine_config: Optional[EngineConfig] = None,
                 model: Optional[SampleModel] = None):
        if dim < 1:
            raise ValueError(f"Dimension must be positive, got {dim}")

        self.logger = logging.getLogger(__name__)
        self.config = engine_config or EngineConfig()
        self.model = model if model is not None else SampleModel.empty(dim, self.config)

        if self.model.dim != dim:
            raise ValueError(f"Model has dimension {self.model.dim}, expected {dim}")

        self._kde_cache: Optional[Mixture] = None
        self._lock = threading.RLock()

    # Properties

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def n_components(self) -> int:
        return len(self.model.mixture)

    @property
    def n_eff(self) -> float:
        return self.model.n_eff

    @property
    def bandwidth(self) -> BandwidthState:
        return self.model.bandwidth

    def can_estimate(self) -> bool:
        """True when enough samples were seen for a bandwidth"""
        return self.model.n_eff >= config.NUMERICS_CONFIG["MIN_BANDWIDTH_SAMPLES"]

    # Updates

    def _invalidate(self) -> None:
        self.model.bandwidth.mark_stale()
        self._kde_cache = None

    def add_sample(self, x: Any) -> None:
        """Incorporate one observation as a Dirac delta and compress when the trigger fires"""
        vector = as_sample_vector(x, self.dim)

        with self._lock:
            model = self.model
            scaled_n = model.n_eff * model.forgetting
            new_weight = 1.0 / (scaled_n + 1.0)
            shrink = scaled_n * new_weight

            for component in model.mixture:
                component.weight *= shrink

            delta = GaussianComponent.dirac(new_weight, vector, model.kind)
            model.mixture.append(delta)
            model.detailed.append(initial_detailed_model(delta))
            model.n_eff = scaled_n + 1.0
            self._invalidate()

            if model.trigger.fires(len(model.mixture)):
                if self.can_estimate():
                    self.compress()
                else:
                    self.logger.debug(f"Skipping compression: effective sample count {model.n_eff:.3g}")

    def add_samples(self, samples: Any) -> None:
        """Incorporate a batch of observations in row order"""
        points, _ = as_points(samples, self.dim)
        for row in points:
            self.add_sample(row)

    # Bandwidth and density

    def ensure_bandwidth(self) -> BandwidthState:
        """Recompute the bandwidth if the model changed since the last estimate"""
        with self._lock:
            if self.model.bandwidth.stale:
                self.model.bandwidth = estimate_bandwidth(self.model)
                self._kde_cache = None
            return self.model.bandwidth

    def _build_kde(self, bandwidth: CovarianceMatrix) -> Mixture:
        kernels = []
        for component in self.model.mixture:
            kernel = component.convolved(bandwidth)
            try:
                factorize_component(kernel)
            except SingularCovarianceError:
                kernel.covariance = correct_covariance(kernel.covariance)
                factorize_component(kernel)
            kernels.append(kernel)
        return Mixture(kernels, self.dim, self.model.kind)

    def _ensure_kde(self) -> Mixture:
        with self._lock:
            state = self.ensure_bandwidth()
            if self._kde_cache is None:
                self._kde_cache = self._build_kde(state.h_opt)
            return self._kde_cache

    def kde(self) -> Mixture:
        """The estimated density: every component convolved with the optimal bandwidth"""
        return self._ensure_kde().copy()

    def log_likelihood(self, x: Any) -> Union[float, np.ndarray]:
        """ln p_KDE(x) for one point or an (m, d) batch"""
        points, single = as_points(x, self.dim)
        values = mixture_log_pdf(self._ensure_kde(), points)
        return float(values[0]) if single else values

    def likelihood(self, x: Any) -> Union[float, np.ndarray]:
        return np.exp(self.log_likelihood(x))

    # Compression

    def _hierarchical_clusters(self, whitened: Mixture, bandwidth: CovarianceMatrix) -> Tuple[List[List[int]], List[float], int]:
        """Split the worst cluster in two until every cluster is within the threshold"""
        smoothed = whitened.convolved(bandwidth)
        for kernel in smoothed:
            factorize_component(kernel)
        d_th = self.model.d_th

        clusters = [list(range(len(whitened)))]
        errors = [local_error(whitened, bandwidth)]
        splits = 0

        while True:
            worst = int(np.argmax(errors))
            if errors[worst] <= d_th or len(clusters[worst]) < 2:
                break

            indices = clusters[worst]
            partition = goldberger_split(smoothed.sub_mixture(indices, normalize=False)).remap(indices)
            clusters[worst:worst + 1] = partition.clusters
            errors[worst:worst + 1] = [local_error(whitened.sub_mixture(c), bandwidth) for c in partition.clusters]
            splits += 1

        return clusters, errors, splits

    def _merge_detailed(self, whitened: Mixture, detailed: List[Mixture], leaf: List[int],
                        bandwidth: CovarianceMatrix) -> Mixture:
        """Two-component detailed model of a merged leaf"""
        total = float(sum(whitened[i].weight for i in leaf))
        extended = Mixture(
            [c.with_weight(whitened[i].weight * c.weight / total) for i in leaf for c in detailed[i]],
            whitened.dim, whitened.kind
        )
        if len(extended) <= 2:
            return extended.normalize()

        partition = goldberger_split(extended.convolved(bandwidth))
        halves = [moment_match(extended, cluster) for cluster in partition.clusters]
        return Mixture(halves, whitened.dim, whitened.kind).normalize()

    def _revitalize_entries(self, entries: List[_Entry], bandwidth: CovarianceMatrix) -> Tuple[List[_Entry], int]:
        """Replace under-fitting components by the components of their detailed models"""
        result: List[_Entry] = []
        replaced = 0

        for component, detailed, origin in entries:
            if len(detailed) > 1 and local_error(detailed, bandwidth) > self.model.d_th:
                for child in detailed:
                    inserted = child.with_weight(component.weight * child.weight)
                    result.append((inserted, initial_detailed_model(inserted), None))
                replaced += 1
            else:
                result.append((component, detailed, origin))

        return result, replaced

    def _commit(self, entries: List[_Entry], state: BandwidthState) -> None:
        """Dewhiten rebuilt entries and install them as the new model"""
        whitening = state.whitening
        components, detailed = [], []

        for component, detail, origin in entries:
            if origin is not None:
                components.append(self.model.mixture[origin])
                detailed.append(self.model.detailed[origin])
            else:
                components.append(whitening.inverse_component(component))
                detailed.append(whitening.inverse_mixture(detail))

        mixture = Mixture(components, self.dim, self.model.kind)
        mixture.normalize()
        self.model.mixture = mixture
        self.model.detailed = detailed

    def compress(self) -> CompressionResult:
        """Reduce the component count while every merged cluster stays within the threshold"""
        with self._lock:
            model = self.model
            before = len(model.mixture)

            if before < 2:
                model.trigger.k_last = before
                result = CompressionResult(before, before)
                model.last_compression = result
                return result

            state = self.ensure_bandwidth()
            whitening = state.whitening
            bandwidth = state.h_white

            whitened = whitening.forward_mixture(model.mixture)
            whitened_detailed = [whitening.forward_mixture(q) for q in model.detailed]

            clusters, errors, splits = self._hierarchical_clusters(whitened, bandwidth)

            entries: List[_Entry] = []
            for leaf in clusters:
                if len(leaf) == 1:
                    entries.append((whitened[leaf[0]], whitened_detailed[leaf[0]], leaf[0]))
                else:
                    merged = moment_match(whitened, leaf)
                    entries.append((merged, self._merge_detailed(whitened, whitened_detailed, leaf, bandwidth), None))

            revitalized = 0
            if self.config.revitalize:
                entries, revitalized = self._revitalize_entries(entries, bandwidth)

            if any(origin is None for _, _, origin in entries):
                self._commit(entries, state)
                self._invalidate()

            model.trigger.k_last = len(model.mixture)
            result = CompressionResult(before, len(model.mixture), splits, errors, revitalized)
            model.last_compression = result

            self.logger.debug(f"Compressed {before} -> {result.components_after} components "
                              f"({splits} splits, {revitalized} revitalized, "
                              f"max error {result.max_leaf_error:.4g})")
            return result

    def revitalize(self) -> int:
        """Split components whose detailed model is poorly represented; returns the number replaced"""
        with self._lock:
            model = self.model
            if len(model.mixture) == 0:
                return 0

            state = self.ensure_bandwidth()
            whitening = state.whitening
            entries: List[_Entry] = [
                (whitening.forward_component(c), whitening.forward_mixture(q), i)
                for i, (c, q) in enumerate(zip(model.mixture, model.detailed))
            ]

            entries, replaced = self._revitalize_entries(entries, state.h_white)
            if replaced:
                self._commit(entries, state)
                self._invalidate()
                self.logger.debug(f"Revitalized {replaced} components")
            return replaced

    # Footprint and persistence

    def footprint_bytes(self) -> int:
        """Bytes of stored floating-point scalars, caches included"""
        with self._lock:
            count = self.model.scalar_count()
            if self._kde_cache is not None:
                count += self._kde_cache.scalar_count()
            return count * config.SCALAR_WIDTH_BYTES

    def to_dict(self) -> Dict[str, Any]:
        """Versioned snapshot of the configuration and model"""
        with self._lock:
            return {
                'format': config.MODEL_FORMAT["NAME"],
                'version': config.MODEL_FORMAT["VERSION"],
                'config': self.config.to_dict(),
                'model': self.model.to_dict()
            }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'OnlineKDE':
        """Restore an estimator from a snapshot"""
        if not isinstance(data, dict) or data.get('format') != config.MODEL_FORMAT["NAME"]:
            raise ModelFormatError("Not an xokde model snapshot")
        if data.get('version') != config.MODEL_FORMAT["VERSION"]:
            raise ModelFormatError(f"Unsupported model snapshot version {data.get('version')!r}")

        try:
            engine_config = EngineConfig.from_dict(data['config'])
            model = SampleModel.from_dict(data['model'])
        except (KeyError, TypeError, ValueError) as e:
            raise ModelFormatError(f"Malformed model snapshot: {str(e)}") from e

        return cls(model.dim, engine_config, model)

    def save(self, path: Union[str, Path]) -> None:
        """Write the snapshot as JSON"""
        path = Path(path)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(self.to_dict(), handle)
        self.logger.info(f"Saved model with {self.n_components} components to {path}")

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'OnlineKDE':
        """Read a JSON snapshot"""
        with open(path, 'r', encoding='utf-8') as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as e:
                raise ModelFormatError(f"Model snapshot is not valid JSON: {str(e)}") from e
        return cls.from_dict(data)

    def __repr__(self) -> str:
        return f"OnlineKDE(dim={self.dim}, components={self.n_components}, n_eff={self.n_eff:.6g})"
