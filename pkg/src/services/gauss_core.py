"""
Gauss Core Service - covariance repair, log-domain factorization, densities and whitening
"""

import logging
import threading
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from scipy import linalg

import config
from src.models.gaussian import CovarianceMatrix, FactorizationCache, GaussianComponent
from src.models.whitening import WhiteningTransform
from src.utils.exceptions import SingularCovarianceError
from src.utils.validators import as_points

logger = logging.getLogger(__name__)

LOG_2PI = float(np.log(2.0 * np.pi))

# cache fills are serialized so concurrent readers never see a half-built cache
_CACHE_LOCK = threading.Lock()


class CorrectionStatus(Enum):
    """Outcome of a degenerate-covariance check"""
    UNCHANGED = "unchanged"
    CORRECTED = "corrected"
    FLOORED = "floored"


def _repair_eigenvalues(eigenvalues: np.ndarray) -> Tuple[np.ndarray, CorrectionStatus]:
    """Replace max-normalized eigenvalues below the threshold by 1% of the healthy mean"""
    numerics = config.NUMERICS_CONFIG
    largest = float(np.max(eigenvalues))

    if not np.isfinite(largest) or largest <= 0.0:
        return np.full_like(eigenvalues, numerics["DEGENERATE_FLOOR"]), CorrectionStatus.FLOORED

    degenerate = (eigenvalues / largest) < numerics["EIGEN_THRESHOLD"]
    if not np.any(degenerate):
        return eigenvalues, CorrectionStatus.UNCHANGED

    alpha = numerics["CORRECTION_FRACTION"] * float(np.mean(eigenvalues[~degenerate]))
    return np.where(degenerate, alpha, eigenvalues), CorrectionStatus.CORRECTED


def correct_covariance_with_status(covariance: CovarianceMatrix) -> Tuple[CovarianceMatrix, CorrectionStatus]:
    """Degenerate-covariance repair that also reports what was done"""
    if covariance.is_diagonal:
        repaired, status = _repair_eigenvalues(covariance.values)
        result = covariance if status is CorrectionStatus.UNCHANGED else CovarianceMatrix(repaired, covariance.kind)
    else:
        eigenvalues, eigenvectors = np.linalg.eigh(covariance.values)
        repaired, status = _repair_eigenvalues(eigenvalues)
        if status is CorrectionStatus.UNCHANGED:
            result = covariance
        else:
            result = CovarianceMatrix((eigenvectors * repaired) @ eigenvectors.T, covariance.kind)

    if status is CorrectionStatus.FLOORED:
        logger.warning(f"All eigenvalues of a {covariance.dim}-dimensional covariance are degenerate; "
                       f"flooring at {config.NUMERICS_CONFIG['DEGENERATE_FLOOR']:g}")
    return result, status


def correct_covariance(covariance: CovarianceMatrix) -> CovarianceMatrix:
    """Return a positive-definite version of a symmetric covariance"""
    return correct_covariance_with_status(covariance)[0]


def factorize(covariance: CovarianceMatrix) -> Tuple[float, CovarianceMatrix]:
    """Log-determinant (sum of log pivots) and inverse of a positive-definite covariance"""
    if covariance.is_diagonal:
        values = covariance.values
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise SingularCovarianceError("Diagonal covariance has a non-positive entry")
        return float(np.sum(np.log(values))), CovarianceMatrix(1.0 / values, covariance.kind)

    try:
        lower = linalg.cholesky(covariance.values, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise SingularCovarianceError(f"Covariance is not positive definite: {str(e)}") from e

    pivots = np.diagonal(lower)
    if not np.all(np.isfinite(pivots)) or np.any(pivots <= 0.0):
        raise SingularCovarianceError("Covariance factorization produced a non-positive pivot")

    log_det = 2.0 * float(np.sum(np.log(pivots)))
    inverse = linalg.cho_solve((lower, True), np.eye(covariance.dim), check_finite=False)
    return log_det, CovarianceMatrix(0.5 * (inverse + inverse.T), covariance.kind)


def factorize_with_correction(covariance: CovarianceMatrix) -> Tuple[float, CovarianceMatrix]:
    """Factorize, repairing the covariance first if it turns out singular"""
    try:
        return factorize(covariance)
    except SingularCovarianceError:
        return factorize(correct_covariance(covariance))


def factorize_component(component: GaussianComponent) -> FactorizationCache:
    """Factorization of a component's covariance, read from or stored in its cache"""
    cache = component.cache
    if cache is not None:
        return cache

    with _CACHE_LOCK:
        if component.cache is None:
            if component.is_dirac:
                raise SingularCovarianceError("Dirac-delta component has no density without a kernel")
            log_det, inverse = factorize(component.covariance)
            component.cache = FactorizationCache(log_det, inverse)
        return component.cache


def gaussian_log_pdf(points: np.ndarray, mean: np.ndarray, log_det: float,
                     inverse: CovarianceMatrix) -> np.ndarray:
    """Normal log-density of each row of ``points`` from a precomputed factorization"""
    diff = points - mean
    if inverse.is_diagonal:
        maha = np.sum(diff * diff * inverse.values, axis=1)
    else:
        maha = np.einsum("ij,jk,ik->i", diff, inverse.values, diff)
    return -0.5 * (mean.size * LOG_2PI + log_det + maha)


def log_density(component: GaussianComponent, x: np.ndarray,
                extra_bandwidth: Optional[CovarianceMatrix] = None) -> Union[float, np.ndarray]:
    """ln N(x; mu, Sigma [+ H]) for one point or an (m, d) batch, evaluated in the log domain"""
    points, single = as_points(x, component.dim)

    if extra_bandwidth is None:
        cache = factorize_component(component)
        log_det, inverse = cache.log_det, cache.inverse
    else:
        log_det, inverse = factorize_with_correction(component.covariance + extra_bandwidth)

    values = gaussian_log_pdf(points, component.mean, log_det, inverse)
    return float(values[0]) if single else values


def whitening_from(mean: np.ndarray, covariance: CovarianceMatrix) -> WhiteningTransform:
    """Whitening transform that maps N(mean, covariance) to N(0, I)"""
    if covariance.is_diagonal:
        if np.any(covariance.values <= 0.0):
            raise SingularCovarianceError("Whitening reference covariance must be positive definite")
        return WhiteningTransform(mean, covariance.values)

    eigenvalues, eigenvectors = np.linalg.eigh(covariance.values)
    if np.any(eigenvalues <= 0.0):
        raise SingularCovarianceError("Whitening reference covariance must be positive definite")
    return WhiteningTransform(mean, eigenvalues, eigenvectors)
