"""Topology inference: system assembly, rank feasibility, recovery, distance-matrix identities"""
import numpy as np
import pytest

from weakgraph.core.exceptions import (
    DegeneratePoints,
    DimensionMismatch,
    InconsistentData,
    InvalidSpec,
    MissingRecord,
)
from weakgraph.services.analysis import limiting_hypothesis, network_divergence, predicted_rates
from weakgraph.services.graph import aggregate_weights, build_weak_graph, limiting_matrices
from weakgraph.services.learning import RecordSpec, run
from weakgraph.services.models import canonical_D, structured_gaussian_D
from weakgraph.services.topology import (
    anchored_differences,
    anchoring_operator,
    build_system,
    edm,
    estimate_from_trajectory,
    exhibit_ambiguity,
    feasibility_report,
    lemma2_projection,
    numerical_rank,
    range_contains_ones,
    solve_topology,
    v3_certificate,
)


def _exact_system(D, x):
    divergences = network_divergence(D, x)
    theta_star = limiting_hypothesis(divergences)
    return build_system(D, theta_star, predicted_rates(divergences, theta_star))


def _structured(rng, H, S):
    means = rng.permutation(np.linspace(0.0, 3.0, H) + rng.uniform(-0.1, 0.1, H))
    return structured_gaussian_D(means.tolist(), means[:S].tolist()).values


class TestBuildSystem:
    def test_two_hypothesis_structured_example(self):
        D = structured_gaussian_D([0.0, 1.0], [0.0, 1.0])
        system = build_system(D, 1, np.array([0.0, -0.2]))
        np.testing.assert_allclose(system.C, [[0.0, 0.0], [-0.5, 0.5], [1.0, 1.0]])
        np.testing.assert_allclose(system.y_tilde, [0.0, -0.2, 1.0])

    def test_anchor_row_is_zero(self):
        D = np.random.default_rng(0).uniform(size=(5, 3))
        for theta in range(1, 6):
            B = anchored_differences(D, theta)
            assert np.all(B[theta - 1] == 0.0)
            np.testing.assert_allclose(B, D[theta - 1] - D)

    def test_identical_columns_collapse_rank(self):
        column = np.array([[0.3], [1.2], [0.7]])
        assert numerical_rank(anchored_differences(np.hstack([column, column]), 1)) <= 1

    def test_inconsistent_anchor_value(self):
        with pytest.raises(InconsistentData):
            build_system(canonical_D(1.0), 2, np.array([-0.5, 0.1, -0.2]))

    def test_shape_and_range_errors(self):
        with pytest.raises(DimensionMismatch):
            build_system(canonical_D(1.0), 2, np.zeros(2))
        with pytest.raises(InvalidSpec):
            anchored_differences(canonical_D(1.0), 4)


class TestNumericalRank:
    def test_trivial_matrices(self):
        assert numerical_rank(np.zeros((3, 2))) == 0
        assert numerical_rank(np.eye(3)) == 3

    def test_structured_gaussian_rank_two(self):
        D = structured_gaussian_D([0.0, 0.7, 1.5, 2.1, 3.4], [0.0, 0.7, 1.5, 2.1])
        for theta in range(1, 6):
            system = build_system(D, theta, np.zeros(5))
            assert numerical_rank(system.C) == 2


class TestSolveTopology:
    def test_canonical_recovery_on_small_graph(self, small_graph, small_x):
        for j in range(2):
            result = solve_topology(_exact_system(canonical_D(1.0), small_x[:, j]))
            assert result.feasible
            assert result.solution_set_dim == 0
            np.testing.assert_allclose(result.x_hat, small_x[:, j], atol=1e-8)
            assert result.residual < 1e-8
            assert result.positivity_ok and result.sums_to_one

    def test_recovery_on_generated_graph(self, setup1_spec):
        graph = build_weak_graph(setup1_spec)
        weights = aggregate_weights(limiting_matrices(graph), graph.partition)
        for agent in weights.receiving_labels:
            x = weights.column(agent)
            result = solve_topology(_exact_system(canonical_D(1.0), x))
            np.testing.assert_allclose(result.x_hat, x, atol=1e-8)

    def test_uniform_divergences_recover_four_components(self):
        rng = np.random.default_rng(17)
        D = rng.uniform(size=(4, 4))
        x = rng.dirichlet(np.ones(4))
        result = solve_topology(_exact_system(D, x))
        assert result.feasible
        np.testing.assert_allclose(result.x_hat, x, atol=1e-8)

    def test_three_structured_components_are_ambiguous(self):
        D = structured_gaussian_D([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
        x = np.array([0.2, 0.3, 0.5])
        system = _exact_system(D, x)
        result = solve_topology(system)
        assert not result.feasible
        assert result.numerical_rank == 2
        assert result.solution_set_dim == 1

        first, second = exhibit_ambiguity(system)
        assert not np.allclose(first, second)
        for candidate in (first, second):
            assert np.all(candidate > 0)
            np.testing.assert_allclose(system.C @ candidate, system.y_tilde, atol=1e-6)

    def test_unique_system_has_no_ambiguity(self, small_x):
        with pytest.raises(InconsistentData):
            exhibit_ambiguity(_exact_system(canonical_D(1.0), small_x[:, 0]))

    def test_rank_dichotomy_on_random_draws(self):
        rng = np.random.default_rng(5)
        for draw in range(200):
            S = int(rng.integers(2, 5))
            if draw % 2:
                D = rng.uniform(size=(S + int(rng.integers(0, 2)), S))
            else:
                S = max(S, 3)
                D = _structured(rng, S, S)
            x = rng.dirichlet(np.ones(S))
            system = _exact_system(D, x)
            result = solve_topology(system)
            assert result.feasible == (result.numerical_rank == S)
            if result.feasible:
                np.testing.assert_allclose(result.x_hat, x, atol=1e-6)
            else:
                first, second = exhibit_ambiguity(system)
                assert not np.allclose(first, second)
                assert np.all(first > 0) and np.all(second > 0)


class TestFeasibilityReport:
    def test_too_few_hypotheses(self):
        report = feasibility_report(np.random.default_rng(1).uniform(size=(2, 3)))
        assert not report.necessary_condition
        assert not report.feasible
        assert len(report.ranks) == 2

    def test_structured_two_components_are_feasible(self):
        for H in range(2, 6):
            means = np.linspace(0.0, 2.0, H).tolist()
            report = feasibility_report(structured_gaussian_D(means, [means[0], means[-1]]))
            assert report.feasible
            assert report.ranks == [2] * H

    def test_structured_three_components_are_infeasible(self):
        report = feasibility_report(structured_gaussian_D([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 3.0]))
        assert report.necessary_condition
        assert not report.feasible
        assert report.ranks == [2, 2, 2, 2]

    def test_structured_rank_sweep(self):
        rng = np.random.default_rng(8)
        for S in range(2, 7):
            for H in range(S, 9):
                for _ in range(50):
                    report = feasibility_report(_structured(rng, H, S))
                    assert report.ranks == [2] * H

    @pytest.mark.slow
    def test_uniform_rank_sweep(self):
        rng = np.random.default_rng(9)
        for S in range(2, 7):
            for H in (S, S + 2):
                for _ in range(500):
                    D = rng.uniform(size=(H, S))
                    assert feasibility_report(D).feasible
                    limiting_hypothesis(network_divergence(D, rng.dirichlet(np.ones(S))))


class TestDistanceMatrices:
    def test_two_points(self):
        np.testing.assert_allclose(edm([0.0, 1.0]), [[0.0, 1.0], [1.0, 0.0]])
        m1, m2 = 0.4, 2.9
        assert np.linalg.det(0.5 * edm([m1, m2])) == pytest.approx(-((0.5 * (m1 - m2) ** 2) ** 2))

    def test_three_point_determinant(self):
        assert np.linalg.det(0.5 * edm([0.0, 1.0, 2.0])) == pytest.approx(1.0)

    def test_rank_three_for_many_points(self):
        rng = np.random.default_rng(2)
        for n in range(3, 9):
            assert numerical_rank(edm(rng.normal(size=n))) == 3

    @pytest.mark.parametrize("H", range(2, 11))
    def test_anchoring_projection(self, H):
        for theta in range(1, H + 1):
            expected = np.full((H, H), 1.0 / H)
            np.testing.assert_allclose(lemma2_projection(theta, H), expected, atol=1e-10)
            assert numerical_rank(anchoring_operator(theta, H)) == H - 1

    def test_v3_identities(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            p = rng.normal(size=3)
            E = edm(p)
            v = v3_certificate(E[0, 1], E[0, 2], E[1, 2])
            np.testing.assert_allclose(v @ E, np.ones(3), atol=1e-8)
            assert abs(v.sum()) <= 1e-8 * np.max(np.abs(v))

    def test_v3_for_evenly_spaced_points(self):
        E = 0.5 * edm([0.0, 1.0, 2.0])
        v = v3_certificate(E[0, 1], E[0, 2], E[1, 2])
        np.testing.assert_allclose(v @ E, np.ones(3), atol=1e-10)

    def test_v3_rejects_coincident_points(self):
        with pytest.raises(DegeneratePoints):
            v3_certificate(0.0, 1.0, 1.0)

    def test_ones_in_column_space(self):
        for S in range(3, 6):
            means = np.arange(float(S))
            assert range_contains_ones(structured_gaussian_D(means.tolist(), means.tolist())) < 1e-8
        for H in range(3, 6):
            means = np.arange(float(H))
            D = structured_gaussian_D(means.tolist(), [means[0], means[-1]])
            assert range_contains_ones(D) > 1e-3


class TestEmpiricalEstimates:
    def test_short_horizon_does_not_crash(self, small_graph, canonical_models, small_x):
        sending, receiving = canonical_models
        models = [sending[0]] * 2 + [sending[1]] * 2 + [receiving] * 2
        spec = RecordSpec(agents=[5, 6], fields=["psi"])
        traj = run(small_graph, models, 10, seed=3, record_spec=spec)
        estimates = estimate_from_trajectory(traj, canonical_D(1.0), 10,
                                             x_true={5: small_x[:, 0], 6: small_x[:, 1]})
        assert [estimate.agent for estimate in estimates] == [5, 6]
        for estimate in estimates:
            assert np.all(np.isfinite(estimate.result.x_hat))
            assert estimate.y_hat[estimate.theta_star_hat - 1] == 0.0
            assert estimate.error is not None

    def test_unrecorded_iteration(self, small_graph, canonical_models):
        sending, receiving = canonical_models
        models = [sending[0]] * 2 + [sending[1]] * 2 + [receiving] * 2
        traj = run(small_graph, models, 10, seed=3, record_spec=RecordSpec(agents=[5], stride=5))
        with pytest.raises(MissingRecord):
            estimate_from_trajectory(traj, canonical_D(1.0), 7)
        with pytest.raises(MissingRecord):
            estimate_from_trajectory(traj, canonical_D(1.0), 5, agents=[6])

    def test_long_run_converges_on_small_graph(self, small_graph, canonical_models, small_x):
        sending, receiving = canonical_models
        models = [sending[0]] * 2 + [sending[1]] * 2 + [receiving] * 2
        traj = run(small_graph, models, 20000, seed=7,
                   record_spec=RecordSpec(agents=[5, 6], fields=["psi"], stride=20000))
        estimates = estimate_from_trajectory(traj, canonical_D(1.0), 20000,
                                             x_true={5: small_x[:, 0], 6: small_x[:, 1]})
        assert [estimate.theta_star_hat for estimate in estimates] == [2, 3]
        for estimate in estimates:
            assert estimate.error < 0.1
