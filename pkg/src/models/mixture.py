"""
Mixture Data Model - Gaussian mixtures, sigma point sets and partitions
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from src.models.gaussian import CovarianceKind, CovarianceMatrix, GaussianComponent


class Mixture:
    """Ordered list of Gaussian components sharing one dimension and representation"""

    def __init__(self, components: Iterable[GaussianComponent], dim: Optional[int] = None,
                 kind: Optional[CovarianceKind] = None):
        self.components: List[GaussianComponent] = list(components)

        if self.components:
            first = self.components[0]
            dim = first.dim if dim is None else dim
            kind = first.kind if kind is None else kind
            for component in self.components:
                if component.dim != dim:
                    raise ValueError(f"Component of dimension {component.dim} in a {dim}-dimensional mixture")
        elif dim is None:
            raise ValueError("An empty mixture needs an explicit dimension")

        self.dim = int(dim)
        self.kind = kind if kind is not None else CovarianceKind.FULL

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[GaussianComponent]:
        return iter(self.components)

    def __getitem__(self, index: int) -> GaussianComponent:
        return self.components[index]

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components], dtype=float)

    @property
    def means(self) -> np.ndarray:
        """Component means stacked as an (n, d) array"""
        if not self.components:
            return np.zeros((0, self.dim))
        return np.vstack([c.mean for c in self.components])

    def covariance_stack(self) -> np.ndarray:
        """Covariances stacked as (n, d, d) for full or (n, d) for diagonal mixtures"""
        if self.kind is CovarianceKind.DIAGONAL:
            if not self.components:
                return np.zeros((0, self.dim))
            return np.vstack([c.covariance.diagonal() for c in self.components])
        if not self.components:
            return np.zeros((0, self.dim, self.dim))
        return np.stack([c.covariance.dense() for c in self.components])

    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def normalize(self) -> "Mixture":
        """Rescale weights in place so that they sum to one"""
        total = self.total_weight()
        if total <= 0:
            raise ValueError("Cannot normalize a mixture with zero total weight")
        for component in self.components:
            component.weight = component.weight / total
        return self

    def normalized(self) -> "Mixture":
        """Normalized copy; component caches are shared"""
        return self.copy().normalize()

    def copy(self) -> "Mixture":
        return Mixture([c.copy() for c in self.components], self.dim, self.kind)

    def append(self, component: GaussianComponent) -> None:
        if component.dim != self.dim:
            raise ValueError(f"Component of dimension {component.dim} in a {self.dim}-dimensional mixture")
        self.components.append(component)

    def sub_mixture(self, indices: Sequence[int], normalize: bool = True) -> "Mixture":
        """Mixture of the selected components, optionally renormalized"""
        sub = Mixture([self.components[i].copy() for i in indices], self.dim, self.kind)
        if normalize:
            sub.normalize()
        return sub

    def map_components(self, func: Callable[[GaussianComponent], GaussianComponent]) -> "Mixture":
        """New mixture with ``func`` applied to every component"""
        mapped = [func(c) for c in self.components]
        kind = mapped[0].kind if mapped else self.kind
        return Mixture(mapped, self.dim, kind)

    def convolved(self, bandwidth: CovarianceMatrix) -> "Mixture":
        """Mixture with every covariance replaced by Sigma_i + H"""
        return self.map_components(lambda c: c.convolved(bandwidth))

    def scalar_count(self) -> int:
        return sum(c.scalar_count() for c in self.components)

    def to_dict(self) -> Dict[str, Any]:
        """Convert mixture to dictionary"""
        return {
            'dim': self.dim,
            'kind': self.kind.value,
            'components': [c.to_dict() for c in self.components]
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Mixture':
        """Create mixture from dictionary"""
        return cls(
            [GaussianComponent.from_dict(c) for c in data['components']],
            int(data['dim']),
            CovarianceKind(data['kind'])
        )

    def __repr__(self) -> str:
        return f"Mixture(n={len(self)}, dim={self.dim}, kind={self.kind.value})"


# A detailed model is a mixture of one or two components
DetailedModel = Mixture


@dataclass
class SigmaPointSet:
    """Weighted sigma points of one Gaussian"""

    points: np.ndarray
    weights: np.ndarray
    origin: int = 0

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.points.shape[0] != self.weights.size:
            raise ValueError("Sigma point and weight counts differ")

    def __len__(self) -> int:
        return int(self.weights.size)

    def mean(self) -> np.ndarray:
        return self.weights @ self.points

    def covariance(self) -> np.ndarray:
        centered = self.points - self.mean()
        return (centered * self.weights[:, None]).T @ centered


@dataclass
class PartitionAssignment:
    """Two disjoint, non-empty index clusters covering all component indices"""

    first: List[int]
    second: List[int]

    def __post_init__(self):
        self.first = sorted(int(i) for i in self.first)
        self.second = sorted(int(i) for i in self.second)
        if not self.first or not self.second:
            raise ValueError("Both clusters of a partition must be non-empty")
        if set(self.first) & set(self.second):
            raise ValueError("Partition clusters must be disjoint")

    @property
    def clusters(self) -> List[List[int]]:
        return [self.first, self.second]

    def covers(self, n: int) -> bool:
        return sorted(self.first + self.second) == list(range(n))

    def remap(self, indices: Sequence[int]) -> "PartitionAssignment":
        """Translate local positions into the given global indices"""
        return PartitionAssignment([indices[i] for i in self.first], [indices[i] for i in self.second])
