"""Agent models, KL divergences and the model families"""
import numpy as np
import pytest
from pydantic import ValidationError

from weakgraph.core.exceptions import (
    DegenerateMeans,
    DivergenceInfinite,
    InvalidCorrelation,
    InvalidShape,
    InvalidSpec,
    OutOfSupport,
)
from weakgraph.services.models import (
    AgentModel,
    BetaDistribution,
    DivergenceMatrix,
    UnitVarianceGaussian,
    beta_family,
    beta_kl_closed_form,
    canonical_D,
    divergence_matrix,
    equicorrelated_offsets,
    kl_divergence,
    kl_divergence_with_error,
    log_likelihood,
    monte_carlo_divergence,
    perturbed_gaussian_family,
    sample,
    structured_gaussian_D,
    structured_gaussian_family,
)

CANONICAL_VALUES = np.array([[0.0, 2.0], [0.5, 0.5], [2.0, 0.0]])


class TestKLDivergence:
    def test_unit_variance_gaussians(self):
        value = kl_divergence(UnitVarianceGaussian(mean=1.0), UnitVarianceGaussian(mean=3.0))
        assert value == pytest.approx(2.0)

    def test_identical_descriptors_give_zero(self):
        beta = BetaDistribution(alpha=2.0, beta=2.0)
        assert kl_divergence(beta, beta) == 0.0

    def test_gaussian_quadrature_matches_closed_form(self):
        truth, lik = UnitVarianceGaussian(mean=0.3), UnitVarianceGaussian(mean=-1.1)
        assert kl_divergence(truth, lik, method="quadrature") == pytest.approx(0.5 * 1.4**2, abs=1e-7)

    def test_beta_quadrature_matches_digamma_form(self):
        truth = BetaDistribution(alpha=3.0, beta=2.0)
        for alpha in (2.05, 2.9, 4.1):
            lik = BetaDistribution(alpha=alpha, beta=2.0)
            assert kl_divergence(truth, lik) == pytest.approx(beta_kl_closed_form(truth, lik), abs=1e-7)

    def test_beta_likelihood_for_gaussian_truth_is_infinite(self):
        with pytest.raises(DivergenceInfinite):
            kl_divergence(UnitVarianceGaussian(mean=0.5), BetaDistribution(alpha=2.0, beta=2.0))

    def test_monte_carlo_estimate_within_standard_error(self):
        truth, lik = UnitVarianceGaussian(mean=0.0), UnitVarianceGaussian(mean=1.0)
        value, stderr = monte_carlo_divergence(truth, lik, 200_000, np.random.default_rng(4))
        assert abs(value - 0.5) < 5 * stderr

    def test_beta_monte_carlo_agrees_with_quadrature(self):
        truth, lik = BetaDistribution(alpha=2.0, beta=2.0), BetaDistribution(alpha=3.0, beta=2.0)
        reference, no_error = kl_divergence_with_error(truth, lik, method="quadrature")
        assert no_error is None
        value, stderr = kl_divergence_with_error(truth, lik, method="monte_carlo", samples=1_000_000,
                                                 rng=np.random.default_rng(11))
        assert 0 < stderr < 1e-3
        assert abs(value - reference) < 3 * stderr

    def test_monte_carlo_default_generator_is_seeded(self):
        truth, lik = BetaDistribution(alpha=2.0, beta=2.0), BetaDistribution(alpha=3.0, beta=2.0)
        first = kl_divergence(truth, lik, method="monte_carlo", samples=1000)
        assert first == kl_divergence(truth, lik, method="monte_carlo", samples=1000)

    @pytest.mark.parametrize("samples", [0, 1])
    def test_monte_carlo_needs_two_samples(self, samples):
        truth, lik = UnitVarianceGaussian(mean=0.0), UnitVarianceGaussian(mean=1.0)
        with pytest.raises(InvalidSpec):
            monte_carlo_divergence(truth, lik, samples, np.random.default_rng(0))
        with pytest.raises(InvalidSpec):
            kl_divergence(truth, lik, method="monte_carlo", samples=samples)

    def test_gaussian_closed_form_matches_quadrature_on_random_pairs(self):
        rng = np.random.default_rng(21)
        for a, b in rng.uniform(-5.0, 5.0, size=(100, 2)):
            truth, lik = UnitVarianceGaussian(mean=a), UnitVarianceGaussian(mean=b)
            closed = kl_divergence(truth, lik, method="analytic")
            assert closed == pytest.approx(0.5 * (a - b) ** 2)
            assert abs(kl_divergence(truth, lik, method="quadrature") - closed) < 1e-6

    def test_unknown_method_is_rejected(self):
        with pytest.raises(InvalidSpec):
            kl_divergence(UnitVarianceGaussian(mean=0.0), UnitVarianceGaussian(mean=1.0), method="exact")


class TestDivergenceMatrix:
    def test_canonical_family_matches_canonical_D(self, canonical_models):
        sending, _ = canonical_models
        D = divergence_matrix(sending)
        np.testing.assert_allclose(D.values, CANONICAL_VALUES)
        np.testing.assert_allclose(canonical_D(1.0).values, CANONICAL_VALUES)
        assert D.provenance[0][0] == "analytic"

    def test_delta_scales_quadratically(self):
        np.testing.assert_allclose(canonical_D(2.0).values, 4.0 * CANONICAL_VALUES)

    def test_structured_gaussian_D(self):
        D = structured_gaussian_D([0.0, 1.0, 2.0], [0.0, 2.0])
        np.testing.assert_allclose(D.values, [[0.0, 2.0], [0.5, 0.5], [2.0, 0.0]])
        family = divergence_matrix(structured_gaussian_family([0.0, 1.0, 2.0], [0.0, 2.0]))
        np.testing.assert_allclose(family.values, D.values)

    def test_coincident_means_are_degenerate(self):
        with pytest.raises(DegenerateMeans):
            structured_gaussian_D([0.0, 1.0, 1.0], [0.0, 1.0])

    def test_truth_must_be_a_likelihood_mean(self):
        with pytest.raises(InvalidSpec):
            structured_gaussian_D([0.0, 1.0, 2.0], [0.5, 2.0])

    def test_beta_entries_come_from_quadrature(self):
        D = divergence_matrix(beta_family(3, 3, 0.1, seed=9))
        assert D.provenance[1][0] == "quadrature"
        assert np.all(D.values >= 0)

    def test_frame_round_trip(self):
        D = divergence_matrix(beta_family(3, 2, 0.1, seed=1))
        restored = DivergenceMatrix.from_frame(D.to_frame())
        np.testing.assert_array_equal(restored.values, D.values)
        assert restored.provenance == D.provenance

    def test_monte_carlo_matrix_is_finite(self):
        models = beta_family(3, 2, 0.1, seed=1)
        D = divergence_matrix(models, method="monte_carlo", samples=200_000, rng=np.random.default_rng(6))
        assert np.all(np.isfinite(D.values))
        assert all(entry == "monte-carlo" for row in D.provenance for entry in row)
        reference = divergence_matrix(models, method="quadrature")
        np.testing.assert_allclose(D.values, reference.values, atol=5e-3)

    def test_monte_carlo_matrix_rejects_empty_sample(self):
        with pytest.raises(InvalidSpec):
            divergence_matrix(beta_family(3, 2, 0.1, seed=1), method="monte_carlo", samples=0)


class TestAgentModel:
    def test_gaussian_truth_with_beta_likelihoods_is_rejected(self):
        with pytest.raises(ValidationError):
            AgentModel(
                truth=UnitVarianceGaussian(mean=0.0),
                likelihoods=(BetaDistribution(alpha=2.0, beta=2.0), BetaDistribution(alpha=3.0, beta=2.0)),
            )

    def test_needs_two_hypotheses(self):
        with pytest.raises(ValidationError):
            AgentModel(truth=UnitVarianceGaussian(mean=0.0), likelihoods=(UnitVarianceGaussian(mean=0.0),))

    def test_log_likelihood(self, canonical_models):
        _, model = canonical_models
        expected = -0.5 * np.log(2 * np.pi) - 0.5 * (0.2 - 1.0) ** 2
        assert log_likelihood(model, 0.2, 3) == pytest.approx(expected)
        with pytest.raises(IndexError):
            log_likelihood(model, 0.2, 4)

    def test_beta_observation_outside_support(self):
        model = beta_family(2, 1, 0.0, seed=0)[0]
        with pytest.raises(OutOfSupport):
            log_likelihood(model, 1.5, 1)

    def test_sample_is_reproducible(self, canonical_models):
        _, model = canonical_models
        first = sample(model, np.random.default_rng(8))
        assert first == sample(model, np.random.default_rng(8))

    def test_gaussian_sample_mean(self):
        model = AgentModel(
            truth=UnitVarianceGaussian(mean=0.0),
            likelihoods=(UnitVarianceGaussian(mean=-1.0), UnitVarianceGaussian(mean=1.0)),
        )
        draws = model.sample(np.random.default_rng(13), size=100_000)
        assert abs(draws.mean()) < 0.02
        assert isinstance(sample(model, np.random.default_rng(13)), float)

    def test_beta_draws_stay_inside_unit_interval(self):
        model = AgentModel(
            truth=BetaDistribution(alpha=2.0, beta=2.0),
            likelihoods=(BetaDistribution(alpha=2.0, beta=2.0), BetaDistribution(alpha=3.0, beta=2.0)),
        )
        rng = np.random.default_rng(14)
        draws = np.array([sample(model, rng) for _ in range(10_000)])
        assert np.all((draws > 0.0) & (draws < 1.0))


class TestFamilies:
    def test_equicorrelated_covariance(self):
        draws = equicorrelated_offsets(4, 0.02, 0.5, np.random.default_rng(0), size=100_000)
        expected = 0.02 * (0.5 * np.eye(4) + 0.5 * np.ones((4, 4)))
        np.testing.assert_allclose(np.cov(draws, rowvar=False), expected, atol=1e-3)

    def test_negative_correlation_within_bounds(self):
        draws = equicorrelated_offsets(3, 1.0, -0.4, np.random.default_rng(1), size=100_000)
        corr = np.corrcoef(draws, rowvar=False)
        assert corr[0, 1] == pytest.approx(-0.4, abs=0.02)

    @pytest.mark.parametrize("correlation", [1.0, -0.5])
    def test_correlation_outside_admissible_range(self, correlation):
        with pytest.raises(InvalidCorrelation):
            equicorrelated_offsets(4, 0.02, correlation, np.random.default_rng(0))

    def test_perturbed_gaussian_stores_offsets(self):
        models = perturbed_gaussian_family(3, 2, 0.02, 0.5, seed=3)
        for model in models:
            means = np.array([lik.mean for lik in model.likelihoods])
            np.testing.assert_allclose(means, np.arange(1, 4) + np.array(model.offsets))
            assert model.truth.mean == 1.0
        again = perturbed_gaussian_family(3, 2, 0.02, 0.5, seed=3)
        assert again == models

    def test_beta_family_shapes(self):
        models = beta_family(3, 3, 0.1, seed=2)
        assert [m.truth.alpha for m in models] == [2.0, 3.0, 4.0]
        for model in models:
            alphas = np.array([lik.alpha for lik in model.likelihoods])
            assert np.all(np.abs(alphas - np.array([2.0, 3.0, 4.0])) <= 0.1)
            assert all(lik.beta == 2.0 for lik in model.likelihoods)

    def test_beta_receiving_truth_override(self):
        assert all(m.truth.alpha == 2.0 for m in beta_family(3, 4, 0.1, seed=2, truth_alpha=2.0))

    def test_beta_half_width_must_keep_shapes_positive(self):
        with pytest.raises(InvalidShape):
            beta_family(3, 2, 2.0, seed=0)
