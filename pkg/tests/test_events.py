"""Event model: observables, states, projectors, multimode propositions, POVMs."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qprospect import (
    DensityOperator,
    GeneralizedProposition,
    MultimodeState,
    Observable,
    PovmFamily,
    ValidationError,
    multimode_probability,
    projector_of,
    validate_povm,
)

from helpers import random_density, random_multimode_coefficients, random_observable, random_unitary


HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


class TestObservable:
    def test_standard_basis(self):
        obs = Observable.standard(3, "N")
        assert obs.dim == 3
        assert np.array_equal(obs.eigenbasis, np.eye(3))
        assert np.array_equal(obs.eigenvalues, [0.0, 1.0, 2.0])

    def test_vector_returns_column(self):
        obs = Observable(np.array([1.0, -1.0]), HADAMARD, "X")
        v = obs.vector(1)
        assert np.abs(v - HADAMARD[:, 1]).max() == 0.0

    def test_degenerate_eigenvalues_rejected(self):
        with pytest.raises(ValidationError):
            Observable(np.array([1.0, 1.0 + 1e-14]), np.eye(2), "A")

    def test_nonunitary_basis_rejected(self):
        with pytest.raises(ValidationError):
            Observable(np.array([0.0, 1.0]), np.array([[1.0, 1.0], [0.0, 1.0]]), "A")

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            Observable(np.array([0.0, 1.0, 2.0]), np.eye(2), "A")

    def test_operator_reconstruction(self, rng):
        obs = random_observable(4, rng)
        op = obs.operator()
        want = sum(
            obs.eigenvalues[n] * np.outer(obs.eigenbasis[:, n], obs.eigenbasis[:, n].conj())
            for n in range(4)
        )
        assert np.abs(op - want).max() < 1e-12


class TestProjectors:
    def test_idempotent_and_complete(self, rng):
        obs = random_observable(3, rng)
        projs = [projector_of(obs, n) for n in range(3)]
        total = sum(p.matrix for p in projs)
        assert np.abs(total - np.eye(3)).max() < 1e-12
        for p in projs:
            assert np.abs(p.matrix @ p.matrix - p.matrix).max() < 1e-12

    def test_orthogonality(self, rng):
        obs = random_observable(3, rng)
        p0 = projector_of(obs, 0).matrix
        p1 = projector_of(obs, 1).matrix
        assert np.abs(p0 @ p1).max() < 1e-12

    def test_source_label(self):
        obs = Observable.standard(2, "Z")
        assert projector_of(obs, 1).source == ("Z", 1)

    def test_index_out_of_range(self):
        with pytest.raises(ValidationError):
            projector_of(Observable.standard(2, "Z"), 2)


class TestDensityOperator:
    def test_accepts_valid_mixture(self):
        rho = DensityOperator(np.diag([0.25, 0.75]))
        assert rho.dim == 2
        assert abs(rho.purity() - (0.0625 + 0.5625)) < 1e-14

    def test_from_pure_normalizes_phase_free(self):
        rho = DensityOperator.from_pure(np.array([1.0, 1.0]) / np.sqrt(2.0))
        assert np.abs(rho.matrix - 0.5 * np.ones((2, 2))).max() < 1e-14

    def test_from_pure_rejects_unnormalized(self):
        with pytest.raises(ValidationError):
            DensityOperator.from_pure(np.array([1.0, 1.0]))

    def test_trace_must_be_one(self):
        with pytest.raises(ValidationError, match="trace"):
            DensityOperator(np.diag([0.5, 0.6]))

    def test_must_be_hermitian(self):
        with pytest.raises(ValidationError):
            DensityOperator(np.array([[0.5, 0.1], [0.2, 0.5]]))

    def test_must_be_positive(self):
        with pytest.raises(ValidationError):
            DensityOperator(np.diag([1.5, -0.5]))

    def test_maximally_mixed(self):
        rho = DensityOperator.maximally_mixed(4)
        assert np.abs(rho.matrix - np.eye(4) / 4.0).max() == 0.0
        assert abs(rho.purity() - 0.25) < 1e-14

    def test_matrix_is_read_only(self):
        rho = DensityOperator.maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 9.0


class TestMultimodeState:
    def test_unnormalized_coefficients_allowed(self):
        state = MultimodeState.in_standard_basis(np.array([2.0, 0.0]))
        assert abs(state.gram() - 4.0) < 1e-14

    def test_all_zero_rejected(self):
        with pytest.raises(ValidationError):
            MultimodeState.in_standard_basis(np.zeros(3))

    def test_vector_combines_basis_columns(self, rng):
        obs = random_observable(3, rng)
        b = np.array([1.0, 1j, 0.0])
        state = MultimodeState(b, obs)
        want = obs.eigenbasis[:, 0] + 1j * obs.eigenbasis[:, 1]
        assert np.abs(state.vector() - want).max() < 1e-14

    def test_plus_state_interference_splits(self):
        # |B> = (|0> + |1>)/sqrt(2) against rho = |B><B|: the event is
        # certain, but each half only arrives via interference
        rho = DensityOperator(np.ones((2, 2)) / 2.0)
        state = MultimodeState.in_standard_basis(np.array([1.0, 1.0]) / np.sqrt(2.0))
        out = multimode_probability(rho, state)
        assert abs(out.p - 1.0) < 1e-14
        assert abs(out.classical - 0.5) < 1e-14
        assert abs(out.quantum - 0.5) < 1e-14

    def test_interference_can_suppress(self):
        # orthogonal proposition: classical part unchanged, interference
        # cancels it exactly
        rho = DensityOperator(np.ones((2, 2)) / 2.0)
        state = MultimodeState.in_standard_basis(np.array([1.0, -1.0]) / np.sqrt(2.0))
        out = multimode_probability(rho, state)
        assert abs(out.p) < 1e-14
        assert abs(out.classical - 0.5) < 1e-14
        assert abs(out.quantum + 0.5) < 1e-14

    def test_single_mode_has_no_interference(self, rng):
        rho = random_density(3, rng)
        state = MultimodeState.in_standard_basis(np.array([0.0, 1.0, 0.0]))
        out = multimode_probability(rho, state)
        assert out.quantum == 0.0
        assert abs(out.p - rho.matrix[1, 1].real) < 1e-14

    def test_decomposition_consistency(self, rng):
        for _ in range(20):
            dim = int(rng.integers(2, 6))
            rho = random_density(dim, rng)
            b = random_multimode_coefficients(dim, rng)
            obs = random_observable(dim, rng)
            state = MultimodeState(b, obs)
            out = multimode_probability(rho, state)
            assert abs(out.p - (out.classical + out.quantum)) < 1e-10
            assert -1e-10 <= out.p <= state.gram() + 1e-10
            assert out.classical >= -1e-12

    def test_probability_window_scales_with_gram(self, rng):
        rho = DensityOperator(np.diag([1.0, 0.0]))
        state = MultimodeState.in_standard_basis(np.array([3.0, 0.0]))
        out = multimode_probability(rho, state)
        assert abs(out.p - 9.0) < 1e-12

    def test_dimension_mismatch(self, rng):
        rho = random_density(2, rng)
        state = MultimodeState.in_standard_basis(np.ones(3))
        with pytest.raises(ValidationError):
            multimode_probability(rho, state)


class TestGeneralizedProposition:
    def test_from_state_weight_and_idempotence(self, rng):
        b = np.array([1.0, 2.0], dtype=complex)
        state = MultimodeState.in_standard_basis(b)
        prop = GeneralizedProposition.from_state(state)
        assert abs(prop.weight() - 5.0) < 1e-12
        # P^2 = <B|B> P for a rank-one weighted projector
        m = prop.operator
        assert np.abs(m @ m - 5.0 * m).max() < 1e-10

    def test_rank_above_one_rejected(self):
        with pytest.raises(ValidationError):
            GeneralizedProposition(np.diag([1.0, 1.0]))

    def test_zero_operator_rejected(self):
        with pytest.raises(ValidationError):
            GeneralizedProposition(np.zeros((2, 2)))


class TestPovm:
    def mub_members(self):
        """Four rank-one members built from two mutually unbiased qubit bases."""
        vecs = [
            np.array([1.0, 0.0]),
            np.array([0.0, 1.0]),
            np.array([1.0, 1.0]) / np.sqrt(2.0),
            np.array([1.0, -1.0]) / np.sqrt(2.0),
        ]
        scale = 1.0 / np.sqrt(2.0)
        return [
            GeneralizedProposition.from_state(
                MultimodeState.in_standard_basis(scale * v)
            )
            for v in vecs
        ]

    def test_unbiased_pair_resolves_identity(self):
        report = validate_povm(self.mub_members())
        assert report.passed
        assert report.residual <= 1e-12

    def test_probabilities_sum_to_one(self, rng):
        rho = random_density(2, rng)
        report = validate_povm(self.mub_members(), rho)
        assert report.probabilities is not None
        assert abs(report.total_probability - 1.0) < 1e-10
        assert all(p >= -1e-12 for p in report.probabilities)

    def test_unscaled_family_fails(self):
        vecs = [np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                np.array([1.0, 1.0]) / np.sqrt(2.0), np.array([1.0, -1.0]) / np.sqrt(2.0)]
        members = [
            GeneralizedProposition.from_state(MultimodeState.in_standard_basis(v))
            for v in vecs
        ]
        report = validate_povm(members)
        assert not report.passed
        assert report.residual > 0.5

    def test_family_constructor_enforces_resolution(self):
        good = PovmFamily(self.mub_members())
        assert len(good) == 4
        with pytest.raises(ValidationError):
            PovmFamily([GeneralizedProposition(np.diag([1.0, 0.0]))])

    def test_empty_family_rejected(self):
        with pytest.raises(ValidationError):
            validate_povm([])

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_random_orthonormal_basis_is_povm(self, seed):
        gen = np.random.default_rng(seed)
        u = random_unitary(3, gen)
        members = [
            GeneralizedProposition.from_state(
                MultimodeState.in_standard_basis(u[:, k])
            )
            for k in range(3)
        ]
        assert validate_povm(members).passed
