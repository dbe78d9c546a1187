"""
Tests for the plug-in bandwidth estimator
"""

import numpy as np
import pytest
from scipy.integrate import trapezoid

from src.models.gaussian import CovarianceKind, CovarianceMatrix, GaussianComponent
from src.models.mixture import Mixture
from src.models.sample_model import EngineConfig
from src.services import bandwidth as bandwidth_service
from src.services.bandwidth import (bandwidth_from_scale, estimate_bandwidth, optimal_scale, pilot_bandwidth,
                                    roughness)
from src.services.gauss_core import whitening_from
from src.services.okde_engine import OnlineKDE
from src.utils.exceptions import BandwidthUnavailableError

DIRAC_ROUGHNESS = 3.0 / (8.0 * np.sqrt(np.pi))

# large floor so that no compression runs while filling
NO_COMPRESSION = EngineConfig(trigger_floor=100000)


def fitted(samples, engine_config=NO_COMPRESSION):
    samples = np.asarray(samples, dtype=float)
    kde = OnlineKDE(samples.shape[1], engine_config)
    kde.add_samples(samples)
    return kde


class TestPilotBandwidth:

    def test_factor(self):
        pilot = pilot_bandwidth(CovarianceMatrix.identity(2), 100.0, 2)
        np.testing.assert_allclose(pilot.values, np.eye(2) * 0.01 ** (1.0 / 3.0))

    def test_rejects_empty_model(self):
        with pytest.raises(ValueError):
            pilot_bandwidth(CovarianceMatrix.identity(2), 0.0, 2)


class TestRoughness:

    @pytest.mark.parametrize("kind", [CovarianceKind.FULL, CovarianceKind.DIAGONAL])
    def test_single_dirac(self, kind):
        mixture = Mixture([GaussianComponent.dirac(1.0, [0.0], kind)])
        value = roughness(mixture, None, CovarianceMatrix.identity(1, kind))
        assert value == pytest.approx(DIRAC_ROUGHNESS, rel=1e-12)

    @pytest.mark.parametrize("kind", [CovarianceKind.FULL, CovarianceKind.DIAGONAL])
    def test_two_diracs_in_the_plane_match_quadrature(self, kind):
        mixture = Mixture([GaussianComponent.dirac(0.5, [-1.0, 0.0], kind),
                           GaussianComponent.dirac(0.5, [1.0, 0.0], kind)])
        value = roughness(mixture, None, CovarianceMatrix.identity(2, kind))

        xs = np.linspace(-10.0, 10.0, 801)
        ys = np.linspace(-8.0, 8.0, 641)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        laplacian = np.zeros_like(gx)
        for centre in (-1.0, 1.0):
            squared = (gx - centre) ** 2 + gy ** 2
            laplacian += 0.5 * np.exp(-0.5 * squared) / (2.0 * np.pi) * (squared - 2.0)
        quadrature = trapezoid(trapezoid(laplacian ** 2, ys, axis=1), xs)

        closed_form = (1.0 - 0.5 * np.exp(-1.0)) / (4.0 * np.pi)
        assert quadrature == pytest.approx(closed_form, rel=1e-6)
        assert value == pytest.approx(closed_form, rel=1e-12)

    def test_matches_quadrature_for_spread_components(self):
        covariances = [np.array([[0.6, 0.2], [0.2, 0.4]]), np.array([[0.3, -0.1], [-0.1, 0.8]])]
        means = [np.array([-0.7, 0.3]), np.array([0.9, -0.4])]
        mixture = Mixture([GaussianComponent(0.5, m, CovarianceMatrix(c)) for m, c in zip(means, covariances)])
        pilot = CovarianceMatrix(np.array([[0.5, 0.1], [0.1, 0.3]]))
        value = roughness(mixture, None, pilot)

        xs = np.linspace(-9.0, 9.0, 721)
        grid = np.stack(np.meshgrid(xs, xs, indexing="ij"), axis=-1)
        laplacian = np.zeros(grid.shape[:2])
        for mean, covariance in zip(means, covariances):
            spread = covariance + pilot.values
            precision = np.linalg.inv(spread)
            offset = grid - mean
            projected = offset @ precision
            normalizer = 2.0 * np.pi * np.sqrt(np.linalg.det(spread))
            density = np.exp(-0.5 * np.sum(offset * projected, axis=-1)) / normalizer
            laplacian += 0.5 * density * (np.sum(projected * projected, axis=-1) - np.trace(precision))
        quadrature = trapezoid(trapezoid(laplacian ** 2, xs, axis=1), xs)

        assert value == pytest.approx(quadrature, rel=1e-6)

    def test_diagonal_path_matches_full_path(self, rng):
        variances = rng.uniform(0.2, 2.0, size=(5, 3))
        means = rng.normal(size=(5, 3))
        weights = np.full(5, 0.2)
        as_diag = Mixture([GaussianComponent(w, m, CovarianceMatrix(v, CovarianceKind.DIAGONAL))
                           for w, m, v in zip(weights, means, variances)])
        as_full = Mixture([GaussianComponent(w, m, CovarianceMatrix(np.diag(v)))
                           for w, m, v in zip(weights, means, variances)])
        pilot = CovarianceMatrix.identity(3).scaled(0.3)

        assert roughness(as_diag, None, pilot) == pytest.approx(roughness(as_full, None, pilot), rel=1e-10)

    def test_whitening_scales_by_jacobian(self, rng, spd_factory):
        mixture = Mixture([GaussianComponent(0.25, rng.normal(size=3) * 2.0, CovarianceMatrix(spd_factory(3)))
                           for _ in range(4)])
        reference = spd_factory(3, scale=3.0)
        whitening = whitening_from(rng.normal(size=3), CovarianceMatrix(reference))
        pilot_white = CovarianceMatrix.identity(3).scaled(0.3)
        pilot = whitening.inverse_covariance(pilot_white)

        original = roughness(mixture, CovarianceMatrix(reference), pilot) * np.sqrt(np.linalg.det(reference))
        whitened = roughness(whitening.forward_mixture(mixture), None, pilot_white)
        assert original == pytest.approx(whitened, rel=1e-8)

    def test_empty_mixture(self):
        assert roughness(Mixture([], 2), None, CovarianceMatrix.identity(2)) == 0.0


class TestOptimalScale:

    def test_formula(self):
        dim, n, r = 2, 50.0, 0.1
        expected = (dim * (4.0 * np.pi) ** (dim / 2.0) * n * r) ** (-1.0 / (dim + 4.0))
        assert optimal_scale(dim, n, r) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -1.0, np.nan, np.inf])
    def test_unusable_roughness_gives_zero(self, bad):
        assert optimal_scale(2, 50.0, bad) == 0.0

    def test_huge_dimension_stays_finite(self):
        beta = optimal_scale(128, 1000.0, 1e-30)
        assert np.isfinite(beta) and beta > 0.0


class TestBandwidthFromScale:

    def test_fallback_to_identity(self, rng, spd_factory):
        whitening = whitening_from(rng.normal(size=2), CovarianceMatrix(spd_factory(2)))
        state = bandwidth_from_scale(whitening, 0.0, CovarianceKind.FULL)

        assert state.fallback_used
        assert state.beta == 0.0
        np.testing.assert_array_equal(state.h_white.values, np.eye(2))
        assert not state.stale

    def test_scale_and_dewhitening(self, rng, spd_factory):
        whitening = whitening_from(rng.normal(size=3), CovarianceMatrix(spd_factory(3)))
        state = bandwidth_from_scale(whitening, 0.5, CovarianceKind.FULL)

        np.testing.assert_allclose(state.h_white.values, 0.25 * np.eye(3))
        np.testing.assert_allclose(whitening.forward_covariance(state.h_opt).values, 0.25 * np.eye(3), atol=1e-10)


class TestEstimateBandwidth:

    def test_needs_two_samples(self):
        kde = fitted([[0.0, 1.0]])
        with pytest.raises(BandwidthUnavailableError):
            estimate_bandwidth(kde.model)

    def test_close_to_normal_reference_rule(self, rng):
        samples = rng.normal(size=(500, 1))
        state = estimate_bandwidth(fitted(samples).model)

        reference_rule = np.std(samples) * (4.0 / (3.0 * 500)) ** 0.2
        width = np.sqrt(state.h_opt.values[0, 0])
        assert 0.7 * reference_rule < width < 1.5 * reference_rule

    def test_four_dimensional_normal_near_reference_rule(self, rng):
        samples = rng.normal(size=(600, 4))
        state = estimate_bandwidth(fitted(samples).model)

        reference_scale = (4.0 / (6.0 * 600)) ** (1.0 / 8.0)
        assert 0.8 * reference_scale < state.beta < 1.25 * reference_scale

    def test_scaling_data_scales_bandwidth(self, rng):
        samples = rng.normal(size=(60, 2)) @ np.array([[2.0, 0.5], [0.0, 1.0]])
        base = estimate_bandwidth(fitted(samples).model)
        scaled = estimate_bandwidth(fitted(10.0 * samples + 3.0).model)

        assert scaled.beta == pytest.approx(base.beta, rel=1e-8)
        np.testing.assert_allclose(scaled.h_opt.values, 100.0 * base.h_opt.values, rtol=1e-8)

    @pytest.mark.parametrize("kind", ["full", "diagonal"])
    def test_constant_feature_still_positive_definite(self, rng, kind):
        samples = np.column_stack([rng.normal(size=40), np.full(40, 5.0)])
        engine_config = EngineConfig(covariance=kind, trigger_floor=100000)
        state = estimate_bandwidth(fitted(samples, engine_config).model)

        assert np.all(np.isfinite(state.h_opt.values))
        assert np.all(np.linalg.eigvalsh(state.h_opt.dense()) > 0.0)

    def test_diagonal_model_gets_diagonal_bandwidth(self, rng):
        samples = rng.normal(size=(30, 3))
        state = estimate_bandwidth(fitted(samples, EngineConfig(covariance="diagonal", trigger_floor=100000)).model)
        assert state.h_opt.is_diagonal

    def test_shrinks_as_samples_accumulate(self, rng):
        samples = rng.normal(size=(800, 2))
        engine_config = EngineConfig(covariance="diagonal", trigger_floor=100000)
        betas = [estimate_bandwidth(fitted(samples[:n], engine_config).model).beta for n in (50, 200, 800)]

        assert betas[0] > betas[1] > betas[2] > 0.0

    def test_random_linear_map_carries_bandwidth_along(self, rng):
        samples = rng.normal(size=(80, 3))
        linear = rng.normal(size=(3, 3)) + 2.0 * np.eye(3)
        offset = rng.normal(size=3) * 5.0

        base = estimate_bandwidth(fitted(samples).model)
        mapped = estimate_bandwidth(fitted(samples @ linear.T + offset).model)

        assert mapped.beta == pytest.approx(base.beta, rel=1e-8)
        np.testing.assert_allclose(mapped.h_opt.values, linear @ base.h_opt.values @ linear.T,
                                   rtol=1e-7, atol=1e-12)

    def test_zero_roughness_falls_back_to_unit_whitened_bandwidth(self, rng, monkeypatch):
        samples = rng.normal(size=(30, 2)) @ np.array([[3.0, 0.0], [1.0, 0.5]])
        model = fitted(samples).model
        monkeypatch.setattr(bandwidth_service, "roughness", lambda mixture, structure, pilot: 0.0)

        state = estimate_bandwidth(model)

        assert state.fallback_used
        assert state.beta == 0.0
        np.testing.assert_array_equal(state.h_white.values, np.eye(2))
        reference = np.cov(samples, rowvar=False, bias=True)
        np.testing.assert_allclose(state.h_opt.values, reference, rtol=1e-8)
