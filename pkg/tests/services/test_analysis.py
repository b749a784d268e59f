"""Network divergence, limiting hypothesis, thresholds and receiving-agent independence"""
import numpy as np
import pytest

from weakgraph.core.exceptions import AmbiguousMinimizer, DimensionMismatch, WrongConfiguration
from weakgraph.services.analysis import (
    analyze,
    analyze_heterogeneous,
    canonical_thresholds,
    limiting_hypothesis,
    network_divergence,
    network_divergence_general,
    predicted_rates,
)
from weakgraph.services.experiment import (
    build_models,
    derive_seeds,
    load_preset,
    replace_receiving_models,
    resolve_graph_spec,
)
from weakgraph.services.graph import aggregate_weights, build_weak_graph, limiting_matrices
from weakgraph.services.learning import RecordSpec, run
from weakgraph.services.models import (
    AgentModel,
    UnitVarianceGaussian,
    canonical_D,
    per_agent_divergences,
)

SIMULATION_SEEDS = [1, 2, 3, 4, 5]
RATE_MARGIN = 0.05


def _preset_setup(name):
    config = load_preset(name)
    seeds = derive_seeds(config)
    graph = build_weak_graph(resolve_graph_spec(config, seeds))
    weights = aggregate_weights(limiting_matrices(graph), graph.partition)
    return config, seeds, graph, weights, build_models(config, seeds)


def _margin(divergences, theta_star):
    return -np.delete(predicted_rates(divergences, theta_star), theta_star - 1).max()


class TestNetworkDivergence:
    def test_hand_computed_values(self, small_x):
        divergences = network_divergence(canonical_D(1.0), small_x[:, 0])
        np.testing.assert_allclose(divergences, [1.25, 0.5, 0.75])
        assert limiting_hypothesis(divergences) == 2
        np.testing.assert_allclose(predicted_rates(divergences, 2), [-0.75, 0.0, -0.25])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            network_divergence(canonical_D(1.0), np.array([0.2, 0.3, 0.5]))

    def test_general_form_reduces_to_homogeneous(self, canonical_models):
        sending, _ = canonical_models
        per_agent = per_agent_divergences([sending[0], sending[0], sending[1]])
        omega = np.array([0.1, 0.3, 0.6])
        np.testing.assert_allclose(
            network_divergence_general(per_agent, omega),
            network_divergence(canonical_D(1.0), np.array([0.4, 0.6])),
        )

    def test_tie_is_ambiguous(self):
        with pytest.raises(AmbiguousMinimizer) as excinfo:
            limiting_hypothesis(np.array([0.5, 0.5, 1.0]))
        assert excinfo.value.exit_code == 4

    def test_rates_are_nonpositive(self):
        divergences = np.array([0.7, 0.2, 0.4])
        rates = predicted_rates(divergences, limiting_hypothesis(divergences))
        assert rates[1] == 0.0
        assert np.all(rates <= 0)


class TestCanonicalThresholds:
    def test_threshold_dichotomy(self):
        D = canonical_D(1.0)
        choices = [limiting_hypothesis(network_divergence(D, np.array([x1, 1 - x1])))
                   for x1 in (0.1, 0.3, 0.5, 0.7, 0.8, 0.9)]
        assert choices == [3, 2, 2, 2, 1, 1]

    def test_regions(self):
        assert canonical_thresholds(np.array([0.9, 0.1])) == "N1-dominant"
        assert canonical_thresholds(np.array([0.5, 0.5])) == "middle"
        assert canonical_thresholds(np.array([0.1, 0.9]), canonical_D(3.0)) == "N2-dominant"

    def test_boundary_is_ambiguous(self):
        with pytest.raises(AmbiguousMinimizer):
            canonical_thresholds(np.array([0.75, 0.25]))

    def test_wrong_configuration(self):
        with pytest.raises(WrongConfiguration):
            canonical_thresholds(np.array([0.2, 0.3, 0.5]))
        skewed = np.array([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]])
        with pytest.raises(WrongConfiguration):
            canonical_thresholds(np.array([0.5, 0.5]), skewed)


class TestAnalysisReport:
    def test_small_graph_report(self, small_graph):
        lim = limiting_matrices(small_graph)
        report = analyze(canonical_D(1.0), aggregate_weights(lim, small_graph.partition))
        assert report.theta_stars() == {5: 2, 6: 3}
        assert [entry.region for entry in report.agents] == ["middle", "N2-dominant"]

    def test_heterogeneous_report_matches(self, small_graph, canonical_models):
        sending, _ = canonical_models
        lim = limiting_matrices(small_graph)
        per_agent = per_agent_divergences([sending[0], sending[0], sending[1], sending[1]])
        report = analyze_heterogeneous(per_agent, lim, small_graph.partition)
        assert report.theta_stars() == {5: 2, 6: 3}
        np.testing.assert_allclose(report.agents[0].divergences, [1.25, 0.5, 0.75], atol=1e-12)


class TestBalancedSetup:
    def test_middle_opinion_everywhere(self):
        config, seeds, graph, weights, models = _preset_setup("setup3")
        receivers = graph.partition.receiving_labels()
        predictions = {}
        for agent in receivers:
            divergences = network_divergence(models.D, weights.column(agent))
            predictions[agent] = (limiting_hypothesis(divergences), _margin(divergences, 2))
        assert all(theta == 2 for theta, _ in predictions.values())

        traj = run(graph, models.agents, config.T, seed=seeds.simulation,
                   record_spec=RecordSpec(agents=receivers, fields=["mu"], stride=config.T))
        for agent, (_, margin) in predictions.items():
            if margin < RATE_MARGIN:
                continue
            assert np.exp(traj.agent_row(config.T, agent, "mu"))[1] > 0.99


class TestMindControl:
    def test_receiving_models_do_not_change_choices(self):
        config, _, graph, weights, models = _preset_setup("setup1")
        stubborn = AgentModel(
            truth=UnitVarianceGaussian(mean=0.8),
            likelihoods=(
                UnitVarianceGaussian(mean=-0.5),
                UnitVarianceGaussian(mean=0.3),
                UnitVarianceGaussian(mean=1.2),
            ),
        )
        replaced = replace_receiving_models(models, graph.partition, [stubborn])
        np.testing.assert_array_equal(replaced.D.values, models.D.values)

        receivers = graph.partition.receiving_labels()
        predicted = {}
        for agent in receivers:
            divergences = network_divergence(models.D, weights.column(agent))
            theta_star = limiting_hypothesis(divergences)
            if _margin(divergences, theta_star) >= RATE_MARGIN:
                predicted[agent] = theta_star

        spec = RecordSpec(agents=receivers, fields=["mu"], stride=config.T)
        for seed in SIMULATION_SEEDS:
            original = run(graph, models.agents, config.T, seed=seed, record_spec=spec)
            stubborn_run = run(graph, replaced.agents, config.T, seed=seed, record_spec=spec)
            for agent, theta_star in predicted.items():
                assert np.argmax(original.agent_row(config.T, agent, "mu")) + 1 == theta_star
                assert np.argmax(stubborn_run.agent_row(config.T, agent, "mu")) + 1 == theta_star
