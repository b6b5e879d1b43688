"""Monte Carlo acceptance runs and parallel determinism."""

import pytest

from lapbound.schemas.experiment import ExperimentMode, GnpConfig
from lapbound.services.experiment_service import expectation_eq7, run_experiment, threshold_probability
from lapbound.services.verification_service import run_suite


@pytest.mark.integration
class TestParallelDeterminism:
    """Rows never depend on the worker count."""

    def test_experiment_rows_independent_of_workers(self):
        config = GnpConfig(n=10, p=0.5, k=1, trials=12, seed=5)
        inline = run_experiment(config, workers=1)
        parallel = run_experiment(config, workers=3)
        assert parallel.trials == inline.trials
        assert parallel.summary.aggregates == inline.summary.aggregates

    def test_betti_rows_independent_of_workers(self):
        config = GnpConfig(n=9, p=0.6, k=1, s=1, trials=6, seed=8, mode=ExperimentMode.MAIN3)
        assert run_experiment(config, workers=2).trials == run_experiment(config, workers=1).trials


@pytest.mark.slow
class TestMonteCarloAcceptance:
    """Desk-scale checks of the expectation, counting and vanishing statements."""

    def test_expectation_matches_formula(self):
        """Sample mean of missing 1-faces at n = 10, p = 1/2 lies within 3 standard errors."""
        config = GnpConfig(
            n=10, p=0.5, k=1, trials=10000, seed=1, mode=ExperimentMode.EXPECTATION_CHECK
        )
        aggregates = run_experiment(config).summary.aggregates
        assert aggregates["expected_missing_k"] == pytest.approx(expectation_eq7(10, 0.5, 1))
        assert abs(aggregates["z"]) <= 3.0

    def test_order_inequality_never_fails(self):
        config = GnpConfig(n=12, p=0.4, k=1, trials=500, seed=2, mode=ExperimentMode.ORDER_CHECK)
        report = run_experiment(config)
        assert report.summary.aggregates["order_passes"] == 500
        assert report.deterministic_failures == []

    def test_vanishing_at_threshold(self):
        """At n = 30 and the refined threshold, b_0 = b_1 = 0 in most trials."""
        p = threshold_probability(30, 1)
        config = GnpConfig(n=30, p=p, k=1, s=1, trials=50, seed=3, mode=ExperimentMode.MAIN3)
        aggregates = run_experiment(config).summary.aggregates
        assert aggregates["joint_vanishing_fraction"] >= 0.9
        assert aggregates["complete_fraction"] >= 0.9
        assert aggregates["delta_chain_failures"] == 0

    @pytest.mark.parametrize(
        "suite, trials",
        [
            ("hodge", 200),
            ("lemma21", 200),
            ("pq", 200),
            ("compound", 100),
            ("main1", 200),
            ("main2", 200),
            ("eq3", 200),
            ("order", 200),
        ],
    )
    def test_property_suites_at_default_size(self, suite, trials):
        """Each suite passes its acceptance run with zero failures."""
        result = run_suite(suite, trials=trials, seed=0, max_vertices=8)
        assert result.passed, result.failures[:1]
        assert result.trials == trials
