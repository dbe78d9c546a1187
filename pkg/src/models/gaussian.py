"""
Gaussian Data Model - covariance representations and mixture components
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np

import config


class CovarianceKind(Enum):
    """Storage representation of a covariance matrix"""
    FULL = "full"
    DIAGONAL = "diagonal"

    @classmethod
    def parse(cls, value: Union[str, "CovarianceKind"]) -> "CovarianceKind":
        """Accept enum members, their values, and the 'diag' shorthand"""
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        if text == "diag":
            text = "diagonal"
        return cls(text)


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Symmetric positive semi-definite matrix, stored full (d x d) or diagonal (d)"""

    values: np.ndarray
    kind: CovarianceKind = CovarianceKind.FULL

    def __post_init__(self):
        """Validate shape, finiteness, symmetry and sign of the diagonal"""
        values = np.array(self.values, dtype=float)

        if self.kind is CovarianceKind.DIAGONAL:
            if values.ndim != 1 or values.size == 0:
                raise ValueError(f"Diagonal covariance must be a non-empty vector, got shape {values.shape}")
        else:
            if values.ndim != 2 or values.shape[0] != values.shape[1] or values.size == 0:
                raise ValueError(f"Full covariance must be a square matrix, got shape {values.shape}")

        if not np.all(np.isfinite(values)):
            raise ValueError("Covariance entries must be finite")

        scale = max(1.0, float(np.max(np.abs(values))))
        tolerance = config.NUMERICS_CONFIG["SYMMETRY_TOLERANCE"] * scale

        if self.kind is CovarianceKind.FULL:
            if not np.allclose(values, values.T, rtol=0.0, atol=tolerance):
                raise ValueError("Full covariance must be symmetric")
            values = 0.5 * (values + values.T)
            diagonal = np.diagonal(values)
        else:
            diagonal = values

        if np.any(diagonal < -tolerance):
            raise ValueError("Covariance diagonal entries must be non-negative")

        # rounding noise from transforms of singular matrices
        if np.any(diagonal < 0.0):
            if self.kind is CovarianceKind.FULL:
                np.fill_diagonal(values, np.maximum(diagonal, 0.0))
            else:
                values = np.maximum(values, 0.0)

        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, dim: int, kind: CovarianceKind = CovarianceKind.FULL) -> "CovarianceMatrix":
        """Zero covariance of a Dirac-delta component"""
        if kind is CovarianceKind.DIAGONAL:
            return cls(np.zeros(dim), kind)
        return cls(np.zeros((dim, dim)), kind)

    @classmethod
    def identity(cls, dim: int, kind: CovarianceKind = CovarianceKind.FULL) -> "CovarianceMatrix":
        """Identity covariance"""
        if kind is CovarianceKind.DIAGONAL:
            return cls(np.ones(dim), kind)
        return cls(np.eye(dim), kind)

    @property
    def dim(self) -> int:
        """Dimension d"""
        return int(self.values.shape[0])

    @property
    def is_diagonal(self) -> bool:
        return self.kind is CovarianceKind.DIAGONAL

    def dense(self) -> np.ndarray:
        """Full d x d array"""
        if self.is_diagonal:
            return np.diag(self.values)
        return np.array(self.values)

    def diagonal(self) -> np.ndarray:
        """Diagonal entries as a vector"""
        if self.is_diagonal:
            return np.array(self.values)
        return np.array(np.diagonal(self.values))

    def is_zero(self) -> bool:
        """True for the exact zero matrix (Dirac-delta flag)"""
        return not np.any(self.values)

    def scaled(self, factor: float) -> "CovarianceMatrix":
        """Covariance multiplied by a scalar"""
        return CovarianceMatrix(self.values * factor, self.kind)

    def __add__(self, other: "CovarianceMatrix") -> "CovarianceMatrix":
        if not isinstance(other, CovarianceMatrix):
            return NotImplemented
        if self.dim != other.dim:
            raise ValueError(f"Cannot add covariances of dimension {self.dim} and {other.dim}")
        if self.kind is other.kind:
            return CovarianceMatrix(self.values + other.values, self.kind)
        return CovarianceMatrix(self.dense() + other.dense(), CovarianceKind.FULL)

    def to_dict(self) -> Dict[str, Any]:
        """Convert covariance to dictionary"""
        return {
            'kind': self.kind.value,
            'values': self.values.tolist()
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CovarianceMatrix':
        """Create covariance from dictionary"""
        return cls(np.asarray(data['values'], dtype=float), CovarianceKind(data['kind']))

    def __repr__(self) -> str:
        return f"CovarianceMatrix(kind={self.kind.value}, dim={self.dim})"


@dataclass(frozen=True)
class FactorizationCache:
    """Log-determinant and inverse of a component covariance"""

    log_det: float
    inverse: CovarianceMatrix


class GaussianComponent:
    """Weighted Gaussian with a lazily filled factorization cache

    Assigning a new covariance invalidates the cache; the cache itself is
    filled by ``gauss_core.factorize_component``.
    """

    def __init__(self, weight: float, mean: np.ndarray, covariance: CovarianceMatrix):
        mean = np.array(mean, dtype=float).reshape(-1)
        if weight < 0 or not np.isfinite(weight):
            raise ValueError(f"Component weight must be finite and non-negative, got {weight}")
        if covariance.dim != mean.size:
            raise ValueError(f"Mean has dimension {mean.size} but covariance has {covariance.dim}")
        if not np.all(np.isfinite(mean)):
            raise ValueError("Component mean must be finite")
        mean.setflags(write=False)

        self.weight = float(weight)
        self._mean = mean
        self._covariance = covariance
        self.cache: Optional[FactorizationCache] = None

    @classmethod
    def dirac(cls, weight: float, point: np.ndarray, kind: CovarianceKind = CovarianceKind.FULL) -> "GaussianComponent":
        """Zero-covariance component representing one observation"""
        point = np.asarray(point, dtype=float).reshape(-1)
        return cls(weight, point, CovarianceMatrix.zeros(point.size, kind))

    @property
    def mean(self) -> np.ndarray:
        return self._mean

    @mean.setter
    def mean(self, value: np.ndarray) -> None:
        value = np.array(value, dtype=float).reshape(-1)
        if value.size != self.dim:
            raise ValueError(f"Mean has dimension {value.size}, expected {self.dim}")
        value.setflags(write=False)
        self._mean = value

    @property
    def covariance(self) -> CovarianceMatrix:
        return self._covariance

    @covariance.setter
    def covariance(self, value: CovarianceMatrix) -> None:
        if value.dim != self.dim:
            raise ValueError(f"Covariance has dimension {value.dim}, expected {self.dim}")
        self._covariance = value
        self.invalidate_cache()

    @property
    def dim(self) -> int:
        return int(self._mean.size)

    @property
    def kind(self) -> CovarianceKind:
        return self._covariance.kind

    @property
    def is_dirac(self) -> bool:
        """True when the stored covariance is exactly zero (a single data point)"""
        return self._covariance.is_zero()

    @property
    def cache_valid(self) -> bool:
        return self.cache is not None

    def invalidate_cache(self) -> None:
        """Mark the cached factorization as stale"""
        self.cache = None

    def with_weight(self, weight: float) -> "GaussianComponent":
        """Copy with another weight; the filled cache is shared"""
        clone = GaussianComponent(weight, self._mean, self._covariance)
        clone.cache = self.cache
        return clone

    def convolved(self, bandwidth: CovarianceMatrix) -> "GaussianComponent":
        """Copy with covariance Sigma + H"""
        return GaussianComponent(self.weight, self._mean, self._covariance + bandwidth)

    def copy(self) -> "GaussianComponent":
        return self.with_weight(self.weight)

    def scalar_count(self) -> int:
        """Number of stored scalars, cache included"""
        count = 1 + self.dim + self._covariance.values.size
        if self.cache is not None:
            count += 1 + self.cache.inverse.values.size
        return count

    def to_dict(self) -> Dict[str, Any]:
        """Convert component to dictionary"""
        return {
            'weight': self.weight,
            'mean': self._mean.tolist(),
            'covariance': self._covariance.to_dict()
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GaussianComponent':
        """Create component from dictionary"""
        return cls(
            float(data['weight']),
            np.asarray(data['mean'], dtype=float),
            CovarianceMatrix.from_dict(data['covariance'])
        )

    def __repr__(self) -> str:
        return (f"GaussianComponent(weight={self.weight:.6g}, dim={self.dim}, "
                f"kind={self.kind.value}, dirac={self.is_dirac})")
