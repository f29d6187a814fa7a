"""Shared random constructors for the test suite."""

import numpy as np

from qprospect import CompositeState, DensityOperator, Observable


def random_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(dim, rng, rank=None):
    rank = dim if rank is None else rank
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = a @ a.conj().T
    return DensityOperator(m / np.trace(m))


def random_observable(dim, rng, label="A"):
    return Observable(np.arange(dim, dtype=float), random_unitary(dim, rng), label)


def random_composite(dim_a, dim_b, rng, rank=None):
    return CompositeState(random_density(dim_a * dim_b, rng, rank).matrix, (dim_a, dim_b))


def random_amplitudes(dim_a, dim_b, rng):
    c = rng.normal(size=(dim_a, dim_b)) + 1j * rng.normal(size=(dim_a, dim_b))
    return c / np.linalg.norm(c)


def random_multimode_coefficients(dim, rng):
    b = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    while not np.any(b):  # pragma: no cover - astronomically unlikely
        b = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return b
