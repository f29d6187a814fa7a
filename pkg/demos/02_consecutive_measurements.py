"""Consecutive measurements: reduction, transitions, and two sequential forms.

Measuring A and registering outcome n updates the state by the
projection postulate; a second measurement of B then sees the reduced
state.  The joint statistics of "B_alpha first, then A_n" form a genuine
probability table.  Replacing the outer projection with a single
time-ordered product gives a complex-valued table instead -- still
summing to one, but with imaginary parts that witness incompatibility.
"""

import numpy as np

from qprospect import (
    DensityOperator,
    Observable,
    apply_measurement,
    born_distribution,
    identity_chain_residual,
    kirkwood_table,
    luders_reduce,
    transition_matrix,
    wigner_table,
)

s2 = 1 / np.sqrt(2)
plus = DensityOperator.from_pure(np.array([s2, s2]))
z = Observable([0.0, 1.0], np.eye(2), "Z")
x = Observable([1.0, -1.0], np.array([[s2, s2], [s2, -s2]]), "X")

print("measure Z on |+>, register outcome 1:")
outcome = apply_measurement(plus, z, 1)
print("  event:", outcome.event, " probability:", outcome.probability)
print("  reduced state diagonal:", outcome.post_state.matrix.diagonal().real)

print()
print("the reduced state answers the same question with certainty:")
reduced = luders_reduce(plus, z, 1)
print("  p(Z=1 | reduced) =", born_distribution(reduced, z)[1])

print()
print("transition probabilities |<n|alpha>|^2 between Z and X:")
t = transition_matrix(z, x)
print(t)
print("rows sum to", t.sum(axis=1), "and columns to", t.sum(axis=0))
print("the matrix is symmetric: max |T - T'| =", np.abs(t - t.T).max())

print()
print("sequential table for 'Z first, then X' on |+>:")
w = wigner_table(plus, x, z)  # indexed [later outcome, first outcome]
for alpha in range(2):
    for n in range(2):
        print(f"  p(Z={alpha} then X={n}) = {w[n, alpha]:.6f}")
print("table total:", w.sum())

print()
print("inserting a complete Z measurement between preparation and X")
print("does not change marginals -- the identity chain closes:")
for n in range(2):
    print(f"  residual for X={n}:", identity_chain_residual(plus, x, n, z))

print()
print("the time-ordered (non-projective) table is complex in general.")
print("ground state, Y-basis first factor, X second:")
ybasis = np.array([[1, 1], [-1j, 1j]]) / np.sqrt(2)
y = Observable([1.0, -1.0], ybasis, "Y")
ground = DensityOperator.from_pure(np.array([1.0, 0.0]))
k = kirkwood_table(ground, y, x)
print(k)
print("total:", k.sum(), "  largest imaginary part:", np.abs(k.imag).max())
print("a nonzero imaginary part cannot occur for compatible observables")
