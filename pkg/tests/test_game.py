"""Prisoner-dilemma prospects: quarter law, broken symmetry, cohort sampling."""

import numpy as np
import pytest

from qprospect import (
    GameSpec,
    InterferenceDistribution,
    ValidationError,
    broken_symmetry_probabilities,
    classical_prospects,
    monte_carlo_cohort,
    quarter_law,
)

# joint-action statistics of the canonical disjunction-effect experiment:
# cooperation is rare whatever the partner does
DISJUNCTION_TABLE = np.array([[0.05, 0.05], [0.45, 0.45]])
EMPIRICAL = (0.37, 0.63)


def triangular_density(points=2001):
    grid = np.linspace(-1.0, 1.0, points)
    return InterferenceDistribution.tabulated(grid, 1.0 - np.abs(grid))


class TestGameSpec:
    def test_classical_prospects_are_row_sums(self):
        spec = GameSpec(DISJUNCTION_TABLE)
        f1, f2 = classical_prospects(spec)
        assert abs(f1 - 0.1) < 1e-14
        assert abs(f2 - 0.9) < 1e-14

    def test_payoff_ordering_enforced(self):
        GameSpec(DISJUNCTION_TABLE, payoffs=(3.0, 0.0, 5.0, 1.0))
        with pytest.raises(ValidationError):
            GameSpec(DISJUNCTION_TABLE, payoffs=(3.0, 1.0, 5.0, 0.0))

    def test_table_shape_and_mass(self):
        with pytest.raises(ValidationError):
            GameSpec(np.ones((2, 3)) / 6.0)
        with pytest.raises(ValidationError):
            GameSpec(np.full((2, 2), 0.3))
        with pytest.raises(ValidationError):
            GameSpec(np.array([[0.5, 0.6], [0.0, -0.1]]))


class TestInterferenceDistribution:
    def test_uniform_pdf(self):
        dist = InterferenceDistribution.uniform()
        assert dist.pdf(0.0) == 0.5
        assert dist.pdf(0.999) == 0.5
        assert dist.pdf(1.5) == 0.0

    def test_tabulated_pdf_interpolates(self):
        dist = triangular_density()
        assert abs(dist.pdf(0.0) - 1.0) < 1e-12
        assert abs(dist.pdf(0.5) - 0.5) < 1e-12
        assert dist.pdf(-1.2) == 0.0

    def test_unnormalized_density_rejected(self):
        grid = np.linspace(-1.0, 1.0, 101)
        with pytest.raises(ValidationError, match="normalized"):
            InterferenceDistribution.tabulated(grid, np.full(101, 0.7))

    def test_skewed_density_rejected(self):
        # normalized but mean-shifted: not an admissible interference law
        grid = np.array([-1.0, 0.0, 1.0])
        density = np.array([0.2, 1.0, 0.0])
        # mass: trapezoids give (0.6 + 0.5) = 1.1 -> rescale first
        density = density / 1.1
        with pytest.raises(ValidationError, match="mean"):
            InterferenceDistribution.tabulated(grid, density)

    def test_negative_density_rejected(self):
        grid = np.array([-1.0, 0.0, 1.0])
        with pytest.raises(ValidationError):
            InterferenceDistribution.tabulated(grid, np.array([1.0, -0.5, 1.0]))

    def test_decreasing_grid_rejected(self):
        with pytest.raises(ValidationError):
            InterferenceDistribution.tabulated(
                np.array([0.0, -0.5, 1.0]), np.ones(3)
            )


class TestQuarterLaw:
    def test_uniform_gives_quarter(self):
        q_plus, q_minus = quarter_law(InterferenceDistribution.uniform())
        assert abs(q_plus - 0.25) <= 1e-10
        assert abs(q_minus + 0.25) <= 1e-10

    def test_triangular_gives_sixth(self):
        # int_0^1 q (1 - q) dq = 1/6
        q_plus, q_minus = quarter_law(triangular_density())
        assert abs(q_plus - 1.0 / 6.0) <= 1e-6
        assert abs(q_plus + q_minus) <= 1e-12

    def test_asymmetric_zero_mean_density(self):
        # lopsided piecewise shape whose mean still vanishes exactly;
        # zero mean forces the half-line moments to balance, and the
        # positive one has the closed form 1/6 here
        grid = np.array([-1.0, -0.5, 0.0, 1.0])
        density = np.array([0.0, 0.5, 1.0, 0.0])
        dist = InterferenceDistribution.tabulated(grid, density)
        q_plus, q_minus = quarter_law(dist)
        assert abs(q_plus - 1.0 / 6.0) < 1e-9
        assert abs(q_plus + q_minus) < 1e-9


class TestBrokenSymmetry:
    def test_reproduces_disjunction_effect(self):
        result = broken_symmetry_probabilities(
            (0.1, 0.9), 0.25, empirical_reference=EMPIRICAL
        )
        assert abs(result.p[0] - 0.35) < 1e-12
        assert abs(result.p[1] - 0.65) < 1e-12
        assert not result.clamped
        dev = result.deviations()
        assert dev is not None
        assert max(dev) <= 0.02 + 1e-12

    def test_favoring_defection_mirrors(self):
        result = broken_symmetry_probabilities((0.1, 0.9), 0.25, favored="defect")
        assert abs(result.p[0] + result.p[1] - 1.0) < 1e-12
        assert result.p[0] < 0.1
        assert result.q_applied == (-0.25, 0.25)

    def test_clamping_saturates(self):
        result = broken_symmetry_probabilities((0.1, 0.9), 0.25, favored="defect")
        # f1 + q1 = -0.15 clamps to 0; f2 + q2 = 1.15 clamps to 1
        assert result.clamped
        assert result.p == (0.0, 1.0)

    def test_no_interference_recovers_classical(self):
        result = broken_symmetry_probabilities((0.3, 0.7), 0.0)
        assert abs(result.p[0] - 0.3) < 1e-14
        assert result.deviations() is None

    def test_input_validation(self):
        with pytest.raises(ValidationError):
            broken_symmetry_probabilities((0.2, 0.9), 0.25)
        with pytest.raises(ValidationError):
            broken_symmetry_probabilities((0.1, 0.9), 1.5)
        with pytest.raises(ValidationError):
            broken_symmetry_probabilities((0.1, 0.9), 0.25, favored="sideways")


class TestMonteCarloCohort:
    def test_broken_cohort_matches_closed_form(self):
        spec = GameSpec(DISJUNCTION_TABLE)
        report = monte_carlo_cohort(
            spec, InterferenceDistribution.uniform(), n_pairs=1_000_000, seed=7
        )
        assert abs(report.cooperation_fraction - 0.35) <= 0.002
        assert abs(report.mean_q - 0.25) <= 4 * report.q_stderr
        assert abs(report.cooperation_fraction + report.defection_fraction - 1.0) < 1e-12

    def test_fixed_q_removes_sampling_noise(self):
        spec = GameSpec(DISJUNCTION_TABLE)
        report = monte_carlo_cohort(
            spec, InterferenceDistribution.uniform(), n_pairs=100,
            fixed_q=True, seed=3,
        )
        assert abs(report.cooperation_fraction - 0.35) < 1e-12
        assert report.q_stderr == 0.0
        assert report.fixed_q

    def test_intact_symmetry_has_no_net_interference(self):
        spec = GameSpec(DISJUNCTION_TABLE)
        report = monte_carlo_cohort(
            spec, InterferenceDistribution.uniform(), n_pairs=1_000_000,
            symmetry="intact", seed=11,
        )
        assert abs(report.mean_q) <= 3 * report.q_stderr
        # uniform on [-1, 1]: sigma = 1/sqrt(3)
        assert abs(report.q_stderr - 1.0 / np.sqrt(3e6)) < 3e-5
        assert report.favored is None

    def test_triangular_cohort_tracks_its_quarter_law(self):
        spec = GameSpec(DISJUNCTION_TABLE)
        dist = triangular_density()
        report = monte_carlo_cohort(spec, dist, n_pairs=200_000, seed=5)
        q_plus, _ = quarter_law(dist)
        assert abs(report.mean_q - q_plus) <= 4 * report.q_stderr

    def test_same_seed_reproduces(self):
        spec = GameSpec(DISJUNCTION_TABLE)
        a = monte_carlo_cohort(spec, InterferenceDistribution.uniform(), 1000, seed=42)
        b = monte_carlo_cohort(spec, InterferenceDistribution.uniform(), 1000, seed=42)
        c = monte_carlo_cohort(spec, InterferenceDistribution.uniform(), 1000, seed=43)
        assert a.cooperation_fraction == b.cooperation_fraction
        assert a.cooperation_fraction != c.cooperation_fraction

    def test_rejects_bad_modes(self):
        spec = GameSpec(DISJUNCTION_TABLE)
        dist = InterferenceDistribution.uniform()
        with pytest.raises(ValidationError):
            monte_carlo_cohort(spec, dist, 0)
        with pytest.raises(ValidationError):
            monte_carlo_cohort(spec, dist, 10, symmetry="intact", fixed_q=True)
        with pytest.raises(ValidationError):
            monte_carlo_cohort(spec, dist, 10, symmetry="sideways")
