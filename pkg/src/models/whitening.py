"""
Whitening Transform Model - maps points, components and mixtures to unit covariance
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.models.gaussian import CovarianceKind, CovarianceMatrix, GaussianComponent
from src.models.mixture import Mixture


@dataclass(eq=False)
class WhiteningTransform:
    """x -> Lambda^(-1/2) Phi^T (x - center)

    ``eigenvectors`` is None for an axis-aligned transform (diagonal
    reference covariance), which keeps diagonal components diagonal.
    """

    center: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float).reshape(-1)
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float).reshape(-1)
        if self.center.size != self.eigenvalues.size:
            raise ValueError("Whitening center and eigenvalues differ in dimension")
        if np.any(self.eigenvalues <= 0) or not np.all(np.isfinite(self.eigenvalues)):
            raise ValueError("Whitening eigenvalues must be finite and positive")
        if self.eigenvectors is not None:
            self.eigenvectors = np.asarray(self.eigenvectors, dtype=float)
        self._inv_sqrt = 1.0 / np.sqrt(self.eigenvalues)
        self._sqrt = np.sqrt(self.eigenvalues)

    @property
    def dim(self) -> int:
        return int(self.center.size)

    @property
    def axis_aligned(self) -> bool:
        return self.eigenvectors is None

    @property
    def matrix(self) -> np.ndarray:
        """Forward linear map W = Lambda^(-1/2) Phi^T"""
        if self.axis_aligned:
            return np.diag(self._inv_sqrt)
        return self._inv_sqrt[:, None] * self.eigenvectors.T

    @property
    def inverse_matrix(self) -> np.ndarray:
        """W^-1 = Phi Lambda^(1/2)"""
        if self.axis_aligned:
            return np.diag(self._sqrt)
        return self.eigenvectors * self._sqrt[None, :]

    # Points

    def forward_points(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        centered = points - self.center
        if self.axis_aligned:
            return centered * self._inv_sqrt
        return (centered @ self.eigenvectors) * self._inv_sqrt

    def inverse_points(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.axis_aligned:
            return points * self._sqrt + self.center
        return (points * self._sqrt) @ self.eigenvectors.T + self.center

    # Covariances

    def forward_covariance(self, covariance: CovarianceMatrix) -> CovarianceMatrix:
        if self.axis_aligned:
            if covariance.is_diagonal:
                return CovarianceMatrix(covariance.values / self.eigenvalues, CovarianceKind.DIAGONAL)
            scaled = self._inv_sqrt[:, None] * covariance.values * self._inv_sqrt[None, :]
            return CovarianceMatrix(scaled, CovarianceKind.FULL)
        rotated = self.eigenvectors.T @ covariance.dense() @ self.eigenvectors
        scaled = self._inv_sqrt[:, None] * rotated * self._inv_sqrt[None, :]
        return CovarianceMatrix(scaled, CovarianceKind.FULL)

    def inverse_covariance(self, covariance: CovarianceMatrix) -> CovarianceMatrix:
        if self.axis_aligned:
            if covariance.is_diagonal:
                return CovarianceMatrix(covariance.values * self.eigenvalues, CovarianceKind.DIAGONAL)
            scaled = self._sqrt[:, None] * covariance.values * self._sqrt[None, :]
            return CovarianceMatrix(scaled, CovarianceKind.FULL)
        scaled = self._sqrt[:, None] * covariance.dense() * self._sqrt[None, :]
        return CovarianceMatrix(self.eigenvectors @ scaled @ self.eigenvectors.T, CovarianceKind.FULL)

    # Components and mixtures

    def forward_component(self, component: GaussianComponent) -> GaussianComponent:
        return GaussianComponent(
            component.weight,
            self.forward_points(component.mean[None, :])[0],
            self.forward_covariance(component.covariance)
        )

    def inverse_component(self, component: GaussianComponent) -> GaussianComponent:
        return GaussianComponent(
            component.weight,
            self.inverse_points(component.mean[None, :])[0],
            self.inverse_covariance(component.covariance)
        )

    def forward_mixture(self, mixture: Mixture) -> Mixture:
        return mixture.map_components(self.forward_component)

    def inverse_mixture(self, mixture: Mixture) -> Mixture:
        return mixture.map_components(self.inverse_component)
