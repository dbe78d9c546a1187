"""
Bandwidth Service - plug-in kernel bandwidth estimation in whitened space
"""

import logging
from typing import Optional

import numpy as np

import config
from src.models.gaussian import CovarianceKind, CovarianceMatrix
from src.models.mixture import Mixture
from src.models.sample_model import BandwidthState, SampleModel
from src.models.whitening import WhiteningTransform
from src.services.gauss_core import LOG_2PI, correct_covariance_with_status, CorrectionStatus, whitening_from
from src.services.mixture_ops import whole_model_gaussian
from src.utils.exceptions import BandwidthUnavailableError, SingularCovarianceError

logger = logging.getLogger(__name__)


def pilot_bandwidth(sample_covariance: CovarianceMatrix, n_eff: float, dim: int) -> CovarianceMatrix:
    """Silverman-style pilot G = Sigma * (4 / ((d + 2) N))^(2 / (d + 4))"""
    if n_eff <= 0:
        raise ValueError(f"Pilot bandwidth needs a positive sample count, got {n_eff}")
    factor = (4.0 / ((dim + 2.0) * n_eff)) ** (2.0 / (dim + 4.0))
    return sample_covariance.scaled(factor)


def _roughness_terms(log_phi: np.ndarray, u_f_u: np.ndarray, u_faf_u: np.ndarray,
                     tr_fa: np.ndarray, tr_fafa: np.ndarray) -> np.ndarray:
    # F-contracted fourth derivative of phi_{A^-1} at delta, with u = A delta
    bracket = (u_f_u - tr_fa) ** 2 - 4.0 * u_faf_u + 2.0 * tr_fafa
    return np.exp(log_phi) * bracket


def _roughness_diagonal(mixture: Mixture, structure: Optional[np.ndarray], pilot: np.ndarray) -> float:
    means = mixture.means
    weights = mixture.weights
    spreads = mixture.covariance_stack() + pilot[None, :]
    dim = mixture.dim
    total = 0.0

    for i in range(len(mixture)):
        combined = spreads[i][None, :] + spreads
        if np.any(combined <= 0.0):
            raise SingularCovarianceError("Roughness kernel covariance is not positive definite")
        inverse = 1.0 / combined
        delta = means[i] - means
        u = delta * inverse
        maha = np.sum(delta * u, axis=1)
        log_phi = -0.5 * (dim * LOG_2PI + np.sum(np.log(combined), axis=1) + maha)

        shape = np.ones(dim) if structure is None else structure
        u_f_u = (u * u) @ shape
        u_faf_u = (u * u * inverse) @ (shape * shape)
        tr_fa = inverse @ shape
        tr_fafa = (inverse * inverse) @ (shape * shape)

        terms = _roughness_terms(log_phi, u_f_u, u_faf_u, tr_fa, tr_fafa)
        total += weights[i] * float(np.sum(weights * terms))

    return total


def _roughness_full(mixture: Mixture, structure: Optional[np.ndarray], pilot: np.ndarray) -> float:
    means = mixture.means
    weights = mixture.weights
    stack = mixture.covariance_stack()
    if stack.ndim == 2:
        stack = np.stack([np.diag(s) for s in stack])
    spreads = stack + pilot[None, :, :]
    dim = mixture.dim
    total = 0.0

    for i in range(len(mixture)):
        combined = spreads[i][None, :, :] + spreads
        try:
            lower = np.linalg.cholesky(combined)
        except np.linalg.LinAlgError as e:
            raise SingularCovarianceError(f"Roughness kernel covariance is not positive definite: {str(e)}") from e

        log_det = 2.0 * np.sum(np.log(np.diagonal(lower, axis1=1, axis2=2)), axis=1)
        inverse = np.linalg.inv(combined)
        inverse = 0.5 * (inverse + np.transpose(inverse, (0, 2, 1)))
        delta = means[i] - means
        u = np.einsum("njk,nk->nj", inverse, delta)
        maha = np.sum(delta * u, axis=1)
        log_phi = -0.5 * (dim * LOG_2PI + log_det + maha)

        if structure is None:
            f_u = u
            shaped = inverse
        else:
            f_u = u @ structure
            shaped = np.matmul(structure[None, :, :], inverse)

        u_f_u = np.sum(u * f_u, axis=1)
        u_faf_u = np.einsum("nj,njk,nk->n", f_u, inverse, f_u)
        tr_fa = np.einsum("njj->n", shaped)
        tr_fafa = np.einsum("njk,nkj->n", shaped, shaped)

        terms = _roughness_terms(log_phi, u_f_u, u_faf_u, tr_fa, tr_fafa)
        total += weights[i] * float(np.sum(weights * terms))

    return total


def roughness(mixture: Mixture, structure: Optional[CovarianceMatrix], pilot: CovarianceMatrix) -> float:
    """Roughness R(p, F, G) of the mixture smoothed by the pilot bandwidth

    ``structure`` is the bandwidth shape F; None means identity, which is the
    case in whitened space.
    """
    if len(mixture) == 0:
        return 0.0

    use_diagonal = (mixture.kind is CovarianceKind.DIAGONAL and pilot.is_diagonal
                    and (structure is None or structure.is_diagonal))

    if use_diagonal:
        shape = None if structure is None else structure.values
        return _roughness_diagonal(mixture, shape, pilot.values)

    shape = None if structure is None else structure.dense()
    return _roughness_full(mixture, shape, pilot.dense())


def optimal_scale(dim: int, n_eff: float, roughness_value: float) -> float:
    """beta = [d (4 pi)^(d/2) N R]^(-1/(d+4)), or 0 when R is not positive"""
    if not np.isfinite(roughness_value) or roughness_value <= 0.0 or n_eff <= 0.0:
        return 0.0
    log_argument = (np.log(dim) + 0.5 * dim * np.log(4.0 * np.pi)
                    + np.log(n_eff) + np.log(roughness_value))
    return float(np.exp(-log_argument / (dim + 4.0)))


def bandwidth_from_scale(whitening: WhiteningTransform, beta: float, kind: CovarianceKind,
                         roughness_value: float = 0.0) -> BandwidthState:
    """Whitened bandwidth beta^2 I, or I when beta is unusable, plus its dewhitened form"""
    identity = CovarianceMatrix.identity(whitening.dim, kind)
    fallback = not np.isfinite(beta) or beta <= 0.0

    h_white = identity if fallback else identity.scaled(beta * beta)
    h_opt = whitening.inverse_covariance(h_white)
    if kind is CovarianceKind.FULL and h_opt.is_diagonal:
        h_opt = CovarianceMatrix(h_opt.dense(), CovarianceKind.FULL)

    return BandwidthState(
        h_opt=h_opt,
        h_white=h_white,
        beta=0.0 if fallback else float(beta),
        roughness=float(roughness_value),
        whitening=whitening,
        fallback_used=fallback,
        stale=False
    )


def estimate_bandwidth(model: SampleModel) -> BandwidthState:
    """Optimal bandwidth of the current model, computed in the whitened frame"""
    required = config.NUMERICS_CONFIG["MIN_BANDWIDTH_SAMPLES"]
    if model.n_eff < required or len(model.mixture) == 0:
        raise BandwidthUnavailableError(model.n_eff, required)

    mixture = model.mixture
    dim = mixture.dim

    whole = whole_model_gaussian(mixture)
    reference, status = correct_covariance_with_status(whole.covariance)
    if status is not CorrectionStatus.UNCHANGED:
        logger.debug(f"Whitening reference covariance {status.value} before bandwidth estimation")

    whitening = whitening_from(whole.mean, reference)
    whitened = whitening.forward_mixture(mixture)

    pilot = pilot_bandwidth(CovarianceMatrix.identity(dim, whitened.kind), model.n_eff, dim)
    roughness_value = roughness(whitened, None, pilot)
    beta = optimal_scale(dim, model.n_eff, roughness_value)

    state = bandwidth_from_scale(whitening, beta, model.kind, roughness_value)
    if state.fallback_used:
        logger.info(f"Roughness {roughness_value:.6g} unusable; falling back to the unit whitened bandwidth")
    return state
