"""
Mixture Operations Service - moment matching, sigma points, Hellinger distance and splitting
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

import config
from src.models.gaussian import CovarianceKind, CovarianceMatrix, GaussianComponent
from src.models.mixture import Mixture, PartitionAssignment, SigmaPointSet
from src.services.gauss_core import factorize_component, log_density

logger = logging.getLogger(__name__)


def moment_match(mixture: Mixture, indices: Optional[Sequence[int]] = None) -> GaussianComponent:
    """Single Gaussian with the weight, mean and covariance of the selected components"""
    selected = list(range(len(mixture))) if indices is None else [int(i) for i in indices]
    if not selected:
        raise ValueError("moment_match needs at least one component")

    if len(selected) == 1:
        only = mixture[selected[0]]
        return GaussianComponent(only.weight, only.mean, only.covariance)

    components = [mixture[i] for i in selected]
    weights = np.array([c.weight for c in components])
    total = float(np.sum(weights))
    if total <= 0.0:
        raise ValueError("moment_match over components with zero total weight")

    means = np.vstack([c.mean for c in components])
    mean = weights @ means / total
    centered = means - mean

    if mixture.kind is CovarianceKind.DIAGONAL:
        spreads = np.vstack([c.covariance.diagonal() for c in components])
        covariance = weights @ (spreads + centered * centered) / total
    else:
        spreads = np.stack([c.covariance.dense() for c in components])
        covariance = (np.einsum("i,ijk->jk", weights, spreads)
                      + (centered * weights[:, None]).T @ centered) / total

    return GaussianComponent(total, mean, CovarianceMatrix(covariance, mixture.kind))


def whole_model_gaussian(mixture: Mixture) -> GaussianComponent:
    """Moment-matched Gaussian of the entire mixture"""
    if len(mixture) == 0:
        raise ValueError("whole_model_gaussian of an empty mixture")
    return moment_match(mixture)


def _eigen_axes(covariance: CovarianceMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (clipped at zero) and eigenvectors as columns"""
    if covariance.is_diagonal:
        return np.maximum(covariance.values, 0.0), np.eye(covariance.dim)
    eigenvalues, eigenvectors = np.linalg.eigh(covariance.values)
    return np.maximum(eigenvalues, 0.0), eigenvectors


def _sigma_point_weights(dim: int) -> Tuple[int, np.ndarray]:
    k = max(0, config.NUMERICS_CONFIG["SIGMA_POINT_M"] - dim)
    weights = np.full(2 * dim + 1, 1.0 / (2.0 * (dim + k)))
    weights[0] = k / (dim + k)
    return k, weights


def sigma_points(component: GaussianComponent, origin: int = 0) -> SigmaPointSet:
    """2d+1 unscented sigma points of a Gaussian"""
    dim = component.dim
    k, weights = _sigma_point_weights(dim)
    eigenvalues, eigenvectors = _eigen_axes(component.covariance)

    # columns are sqrt((d+k) lambda_j) U_j
    offsets = np.sqrt(dim + k) * eigenvectors * np.sqrt(eigenvalues)[None, :]
    points = np.vstack([component.mean, component.mean + offsets.T, component.mean - offsets.T])
    return SigmaPointSet(points, weights, origin)


def _mixture_sigma_points(mixture: Mixture) -> Tuple[np.ndarray, np.ndarray]:
    """Stacked sigma points of every component, weighted by component weight"""
    dim = mixture.dim
    k, point_weights = _sigma_point_weights(dim)
    means = mixture.means
    scale = np.sqrt(dim + k)

    if mixture.kind is CovarianceKind.DIAGONAL:
        spreads = np.sqrt(np.maximum(mixture.covariance_stack(), 0.0)) * scale
        # offsets[i, j] = spread along axis j of component i
        offsets = spreads[:, :, None] * np.eye(dim)[None, :, :]
    else:
        eigenvalues, eigenvectors = np.linalg.eigh(mixture.covariance_stack())
        root = np.sqrt(np.maximum(eigenvalues, 0.0)) * scale
        offsets = np.transpose(eigenvectors * root[:, None, :], (0, 2, 1))

    points = np.concatenate([means[:, None, :], means[:, None, :] + offsets, means[:, None, :] - offsets], axis=1)
    weights = mixture.weights[:, None] * point_weights[None, :]
    return points.reshape(-1, dim), weights.reshape(-1)


def component_log_densities(mixture: Mixture, points: np.ndarray) -> np.ndarray:
    """(m, n) matrix of log-densities of each point under each component"""
    points = np.atleast_2d(points)
    columns = np.empty((points.shape[0], len(mixture)))
    for i, component in enumerate(mixture):
        columns[:, i] = log_density(component, points)
    return columns


def _log_weights(weights: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(weights)


def _combine(log_densities: np.ndarray, weights: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return logsumexp(log_densities + _log_weights(weights)[None, :], axis=1)


def mixture_log_pdf(mixture: Mixture, points: np.ndarray) -> np.ndarray:
    """log sum_i w_i N(x; mu_i, Sigma_i) for each row, via log-sum-exp"""
    return _combine(component_log_densities(mixture, points), mixture.weights)


def hellinger(p1: Mixture, p2: Mixture) -> float:
    """Unscented estimate of the Hellinger distance between two normalized mixtures

    Sigma points come from the equal-weight combination p_c = (p1 + p2) / 2,
    so the sum is an importance-sampled estimate of the Hellinger integral.
    """
    if p1.dim != p2.dim:
        raise ValueError(f"Cannot compare mixtures of dimension {p1.dim} and {p2.dim}")

    combined = Mixture(
        [c.with_weight(0.5 * c.weight) for c in p1] + [c.with_weight(0.5 * c.weight) for c in p2],
        p1.dim, p1.kind
    )
    points, point_weights = _mixture_sigma_points(combined)

    densities = component_log_densities(combined, points)
    n1 = len(p1)
    log_p1 = _combine(densities[:, :n1], p1.weights)
    log_p2 = _combine(densities[:, n1:], p2.weights)
    log_pc = _combine(densities, combined.weights)

    with np.errstate(invalid="ignore", over="ignore"):
        g = (np.exp(0.5 * (log_p1 - log_pc)) - np.exp(0.5 * (log_p2 - log_pc))) ** 2
    g = np.where(np.isfinite(log_pc) & np.isfinite(g), g, 0.0)

    squared = 0.5 * float(np.sum(point_weights * g))
    return float(np.sqrt(min(max(squared, 0.0), 1.0)))


def gaussian_kl(component: GaussianComponent, reference: GaussianComponent) -> float:
    """Closed-form KL(component || reference)"""
    single = Mixture([component], component.dim, component.kind)
    return float(_kl_to_reference(single, reference)[0])


def _kl_to_reference(mixture: Mixture, reference: GaussianComponent) -> np.ndarray:
    """KL divergence of every (positive-definite) component to one reference Gaussian"""
    ref = factorize_component(reference)
    diffs = mixture.means - reference.mean

    if mixture.kind is CovarianceKind.DIAGONAL and ref.inverse.is_diagonal:
        spreads = mixture.covariance_stack()
        inverse = ref.inverse.values
        trace_term = spreads @ inverse
        maha = (diffs * diffs) @ inverse
    else:
        spreads = mixture.covariance_stack()
        if spreads.ndim == 2:
            spreads = np.stack([np.diag(s) for s in spreads])
        inverse = ref.inverse.dense()
        trace_term = np.einsum("ijk,jk->i", spreads, inverse)
        maha = np.einsum("ij,jk,ik->i", diffs, inverse, diffs)

    log_dets = np.array([factorize_component(c).log_det for c in mixture])
    return 0.5 * (trace_term + maha - mixture.dim + ref.log_det - log_dets)


def _ensure_both_clusters(labels: np.ndarray, divergences: np.ndarray) -> np.ndarray:
    """Move the worst-fitting component into an emptied cluster"""
    for empty in (0, 1):
        if not np.any(labels == empty):
            survivor = 1 - empty
            labels = labels.copy()
            labels[int(np.argmax(divergences[:, survivor]))] = empty
    return labels


def goldberger_split(mixture: Mixture, max_iterations: Optional[int] = None) -> PartitionAssignment:
    """Two-way K-means over components with the Gaussian KL divergence as distance

    Components must have positive-definite covariances (callers convolve with
    the bandwidth first).
    """
    n = len(mixture)
    if n < 2:
        raise ValueError("goldberger_split needs at least two components")
    if n == 2:
        return PartitionAssignment([0], [1])

    if max_iterations is None:
        max_iterations = config.NUMERICS_CONFIG["GOLDBERGER_MAX_ITERATIONS"]

    seeds = principal_split(whole_model_gaussian(mixture))
    representatives = [seeds[0], seeds[1]]
    assignment: Optional[np.ndarray] = None

    for iteration in range(max_iterations):
        divergences = np.column_stack([_kl_to_reference(mixture, r) for r in representatives])
        labels = _ensure_both_clusters(np.argmin(divergences, axis=1), divergences)

        if assignment is not None and np.array_equal(labels, assignment):
            break
        assignment = labels
        representatives = [moment_match(mixture, np.flatnonzero(labels == j)) for j in (0, 1)]
    else:
        logger.debug(f"goldberger_split stopped after {max_iterations} iterations on {n} components")

    return PartitionAssignment(np.flatnonzero(assignment == 0).tolist(), np.flatnonzero(assignment == 1).tolist())


def principal_axis(covariance: CovarianceMatrix) -> Tuple[float, np.ndarray]:
    """Largest eigenvalue and its unit eigenvector"""
    if covariance.is_diagonal:
        axis = int(np.argmax(covariance.values))
        direction = np.zeros(covariance.dim)
        direction[axis] = 1.0
        return max(float(covariance.values[axis]), 0.0), direction
    eigenvalues, eigenvectors = np.linalg.eigh(covariance.values)
    return max(float(eigenvalues[-1]), 0.0), eigenvectors[:, -1]


def principal_split(component: GaussianComponent, offset: Optional[float] = None) -> Mixture:
    """Moment-preserving split into two halves along the principal axis"""
    if offset is None:
        offset = config.NUMERICS_CONFIG["SPLIT_OFFSET"]

    covariance = component.covariance
    eigenvalue, direction = principal_axis(covariance)
    shift = offset * np.sqrt(eigenvalue) * direction
    shrink = offset * offset * eigenvalue

    if covariance.is_diagonal:
        child_values = covariance.values - shrink * direction
    else:
        child_values = covariance.values - shrink * np.outer(direction, direction)
    child_covariance = CovarianceMatrix(child_values, covariance.kind)

    half = 0.5 * component.weight
    children: List[GaussianComponent] = [
        GaussianComponent(half, component.mean + shift, child_covariance),
        GaussianComponent(half, component.mean - shift, child_covariance)
    ]
    return Mixture(children, component.dim, component.kind)
