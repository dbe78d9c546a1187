"""
Models package for xokde

Contains the Gaussian, mixture, whitening, sample-model and benchmark report structures.
"""

from .gaussian import CovarianceKind, CovarianceMatrix, FactorizationCache, GaussianComponent
from .mixture import DetailedModel, Mixture, PartitionAssignment, SigmaPointSet
from .whitening import WhiteningTransform

__version__ = "1.0.0"

# Export main classes
__all__ = [
    'CovarianceKind',
    'CovarianceMatrix',
    'FactorizationCache',
    'GaussianComponent',
    'Mixture',
    'DetailedModel',
    'PartitionAssignment',
    'SigmaPointSet',
    'WhiteningTransform'
]
