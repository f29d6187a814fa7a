"""Linear-algebra primitives: tensor products, partial traces, exponentials."""

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from qprospect import (
    NumericContractError,
    SizeLimitError,
    ValidationError,
    matrix_exponential,
    partial_trace,
    spectral_norm,
    tensor_product,
)
from qprospect.qcore import as_complex_matrix, as_complex_vector, real_probability

from helpers import random_density, random_unitary


def kron_by_loops(a, b):
    """Reference Kronecker product, written out indexwise."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


class TestTensorProduct:
    def test_matches_indexwise_reference(self, rng):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.abs(tensor_product(a, b) - kron_by_loops(a, b)).max() < 1e-14

    def test_first_factor_is_slow_index(self):
        # basis state |1> x |0> must land at flat index 1*2+0 = 2
        e1 = np.diag([0.0, 1.0])
        e0 = np.diag([1.0, 0.0])
        joint = tensor_product(e1, e0)
        assert joint[2, 2] == 1.0
        assert np.trace(joint) == 1.0

    def test_trace_is_multiplicative(self, rng):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        got = np.trace(tensor_product(a, b))
        assert abs(got - np.trace(a) * np.trace(b)) < 1e-12

    def test_size_cap(self):
        big = np.eye(70)
        with pytest.raises(SizeLimitError):
            tensor_product(big, big)


class TestPartialTrace:
    def test_maximally_entangled_reduces_to_mixed(self):
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1.0 / np.sqrt(2.0)
        joint = np.outer(psi, psi.conj())
        for keep in (0, 1):
            red = partial_trace(joint, (2, 2), keep)
            assert np.abs(red - np.eye(2) / 2.0).max() < 1e-14

    def test_product_input_factorizes(self, rng):
        rho_a = random_density(3, rng).matrix
        rho_b = random_density(2, rng).matrix
        joint = tensor_product(rho_a, rho_b)
        assert np.abs(partial_trace(joint, (3, 2), 0) - rho_a).max() < 1e-13
        assert np.abs(partial_trace(joint, (3, 2), 1) - rho_b).max() < 1e-13

    @given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_trace_preserved(self, da, db, seed):
        gen = np.random.default_rng(seed)
        m = gen.normal(size=(da * db, da * db)) + 1j * gen.normal(size=(da * db, da * db))
        for keep in (0, 1):
            red = partial_trace(m, (da, db), keep)
            assert abs(np.trace(red) - np.trace(m)) < 1e-11

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            partial_trace(np.eye(6), (2, 2), 0)


class TestMatrixExponential:
    def test_agrees_with_scipy_expm(self, rng):
        for dim in (2, 3, 5):
            h = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            h = (h + h.conj().T) / 2.0
            t = float(rng.uniform(0.1, 3.0))
            want = scipy.linalg.expm(-1j * t * h)
            assert np.abs(matrix_exponential(h, t) - want).max() < 1e-12

    def test_quarter_turn_of_pauli_x(self):
        sx = np.array([[0.0, 1.0], [1.0, 0.0]])
        u = matrix_exponential(sx, np.pi / 2.0)
        assert np.abs(u - (-1j) * sx).max() < 1e-14

    def test_result_is_unitary(self, rng):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = (h + h.conj().T) / 2.0
        u = matrix_exponential(h, 1.7)
        assert np.abs(u @ u.conj().T - np.eye(4)).max() < 1e-12

    def test_zero_time_is_identity(self, rng):
        h = rng.normal(size=(3, 3))
        h = (h + h.T) / 2.0
        assert np.abs(matrix_exponential(h, 0.0) - np.eye(3)).max() < 1e-14

    def test_non_hermitian_generator_rejected(self):
        with pytest.raises(ValidationError):
            matrix_exponential(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)


class TestSpectralNorm:
    def test_matches_largest_eigenvalue(self, rng):
        rho = random_density(5, rng).matrix
        assert abs(spectral_norm(rho) - np.linalg.eigvalsh(rho)[-1]) < 1e-12

    def test_pure_state_has_unit_norm(self, rng):
        u = random_unitary(4, rng)
        rho = np.outer(u[:, 0], u[:, 0].conj())
        assert abs(spectral_norm(rho) - 1.0) < 1e-12

    def test_negative_spectrum_rejected(self):
        with pytest.raises(ValidationError):
            spectral_norm(np.diag([1.0, -0.5]))


class TestConversionGuards:
    def test_nonsquare_rejected(self):
        with pytest.raises(ValidationError):
            as_complex_matrix(np.zeros((2, 3)), "m")

    def test_nonfinite_rejected(self):
        with pytest.raises(ValidationError):
            as_complex_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]), "m")
        with pytest.raises(ValidationError):
            as_complex_vector(np.array([np.inf, 0.0]), "v")

    def test_oversized_rejected(self):
        with pytest.raises(SizeLimitError):
            as_complex_matrix(np.eye(5000), "m")

    def test_probability_window(self):
        assert real_probability(1.0 + 1e-14, "p") == 1.0
        assert real_probability(-1e-14, "p") == 0.0
        with pytest.raises(NumericContractError):
            real_probability(1.5, "p")
        with pytest.raises(NumericContractError):
            real_probability(0.5 + 1e-6j, "p")
