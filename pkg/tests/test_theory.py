import numpy as np
import pytest
from scipy import stats

from dqc.errors import NumericalError
from dqc.theory import (
    PopulationPair,
    UnivariateDistribution,
    correct_classification_prob,
    decision_threshold,
    from_scipy,
    misclassification_prob,
    optimal_level,
    psi_curve,
)


def uniform_pair():
    return PopulationPair(from_scipy(stats.uniform(0, 1)), from_scipy(stats.uniform(0.5, 1)))


def normal_pair(delta=1.0):
    return PopulationPair(from_scipy(stats.norm(0, 1)), from_scipy(stats.norm(delta, 1)))


def bayes_rate_from_densities(pdf_a, pdf_b, priors, lo, hi, m=2_000_000):
    """Independent oracle: integrate max(pi_a g_a, pi_b g_b) on a fine grid."""
    z = np.linspace(lo, hi, m)
    return float(np.trapezoid(np.maximum(priors[0] * pdf_a(z), priors[1] * pdf_b(z)), z))


class TestDecisionThreshold:
    def test_midpoint_at_half(self):
        pair = normal_pair()
        assert decision_threshold(0.5, pair) == pytest.approx(0.5, abs=1e-12)

    def test_identical_distributions(self):
        d = from_scipy(stats.norm(2, 3))
        pair = PopulationPair(d, d)
        for theta in (0.2, 0.5, 0.8):
            assert decision_threshold(theta, pair) == pytest.approx(stats.norm(2, 3).ppf(theta), abs=1e-9)

    def test_uniform_hand_value(self):
        # theta * 0.4 + (1 - theta) * 0.9 at theta = 0.4
        assert decision_threshold(0.4, uniform_pair()) == pytest.approx(0.7, abs=1e-12)

    def test_threshold_between_the_two_quantiles(self):
        pair = PopulationPair(from_scipy(stats.lognorm(1.0)), from_scipy(stats.norm(3, 2)))
        for theta in np.linspace(0.05, 0.95, 19):
            qa = stats.lognorm(1.0).ppf(theta)
            qb = stats.norm(3, 2).ppf(theta)
            lo, hi = min(qa, qb), max(qa, qb)
            assert lo - 1e-12 <= decision_threshold(theta, pair) <= hi + 1e-12

    def test_order_is_resolved_internally(self):
        # swapping the populations leaves the threshold unchanged
        pair = uniform_pair()
        swapped = PopulationPair(pair.dist_b, pair.dist_a)
        for theta in (0.1, 0.4, 0.9):
            assert decision_threshold(theta, swapped) == pytest.approx(decision_threshold(theta, pair), abs=1e-12)


class TestCorrectClassificationProb:
    def test_uniform_pair_is_flat_three_quarters(self):
        pair = uniform_pair()
        for theta in np.linspace(0.01, 0.99, 25):
            assert correct_classification_prob(theta, pair) == pytest.approx(0.75, abs=1e-12)

    def test_identical_distributions_give_half(self):
        d = from_scipy(stats.norm())
        pair = PopulationPair(d, d)
        for theta in (0.1, 0.5, 0.9):
            assert correct_classification_prob(theta, pair) == pytest.approx(0.5, abs=1e-9)

    def test_degenerate_prior(self):
        pair = PopulationPair(from_scipy(stats.uniform(0, 1)), from_scipy(stats.uniform(0.5, 1)), (1.0, 0.0))
        theta = 0.4
        cut = decision_threshold(theta, pair)
        assert correct_classification_prob(theta, pair) == pytest.approx(stats.uniform(0, 1).cdf(cut), abs=1e-12)

    def test_range_and_complement(self):
        pair = normal_pair(0.7)
        for theta in np.linspace(0.02, 0.98, 25):
            psi = correct_classification_prob(theta, pair)
            assert 0.0 <= psi <= 1.0
            assert misclassification_prob(theta, pair) == 1.0 - psi


class TestOptimalLevel:
    def test_symmetric_normal_shift(self):
        theta_star, psi_star = optimal_level(normal_pair(1.0))
        assert 0.45 <= theta_star <= 0.55
        assert psi_star == pytest.approx(stats.norm.cdf(0.5), abs=1e-6)

    def test_uniform_pair_flat_objective(self):
        theta_star, psi_star = optimal_level(uniform_pair())
        assert psi_star == pytest.approx(0.75, abs=1e-9)
        assert 0.0 < theta_star < 1.0

    def test_matches_bayes_oracle_for_lognormal_shift(self):
        ln = stats.lognorm(1.0)
        shifted = stats.lognorm(1.0, loc=0.5)
        pair = PopulationPair(from_scipy(ln), from_scipy(shifted))
        _, psi_star = optimal_level(pair)
        oracle = bayes_rate_from_densities(ln.pdf, shifted.pdf, (0.5, 0.5), 1e-9, 80.0)
        assert psi_star == pytest.approx(oracle, abs=1e-3)

    def test_dominates_the_median_level(self):
        for pair in (normal_pair(0.3), uniform_pair(), PopulationPair(from_scipy(stats.lognorm(0.8)), from_scipy(stats.lognorm(0.8, loc=0.7)))):
            _, psi_star = optimal_level(pair)
            assert psi_star >= correct_classification_prob(0.5, pair) - 1e-12

    def test_symmetric_location_shift_prefers_half(self):
        for delta in (0.5, 1.0, 2.0):
            theta_star, _ = optimal_level(normal_pair(delta), tolerance=1e-7)
            assert abs(theta_star - 0.5) < 0.01

    def test_non_finite_probability_raises(self):
        bad = UnivariateDistribution(cdf=lambda x: float("nan"), quantile=lambda t: 0.0)
        with pytest.raises(NumericalError):
            optimal_level(PopulationPair(bad, from_scipy(stats.norm())))

    def test_bad_tolerance_rejected(self):
        with pytest.raises(ValueError):
            optimal_level(normal_pair(), tolerance=0.0)


class TestPsiCurve:
    def test_shape_and_consistency(self):
        pair = normal_pair(0.8)
        curve = psi_curve(pair)
        assert curve.shape == (199, 2)
        mid = curve[99]
        assert mid[0] == pytest.approx(0.5, abs=1e-12)
        assert mid[1] == pytest.approx(correct_classification_prob(0.5, pair), abs=1e-12)

    def test_custom_levels(self):
        curve = psi_curve(uniform_pair(), levels=[0.2, 0.5, 0.8])
        assert curve.shape == (3, 2)
        assert np.allclose(curve[:, 1], 0.75, atol=1e-12)


class TestTypes:
    def test_inverse_check_passes_for_continuous_distribution(self):
        from_scipy(stats.norm(1, 2)).check_inverse()

    def test_inverse_check_fails_for_mismatched_pair(self):
        broken = UnivariateDistribution(cdf=stats.norm(0, 1).cdf, quantile=stats.norm(5, 1).ppf)
        with pytest.raises(ValueError, match="mutual inverses"):
            broken.check_inverse()

    def test_priors_must_sum_to_one(self):
        d = from_scipy(stats.norm())
        with pytest.raises(ValueError):
            PopulationPair(d, d, (0.6, 0.6))
        with pytest.raises(ValueError):
            PopulationPair(d, d, (-0.2, 1.2))
