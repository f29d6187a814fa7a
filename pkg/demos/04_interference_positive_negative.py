"""Interference can enhance or suppress a multimode event.

The probability of finding a system in a superposition |B> has a
classical piece (the weighted occupations) and a quantum piece (the
mode coherences).  The quantum piece is bounded but signed: it can push
the probability all the way to the window edges [0, <B|B>].
"""

import numpy as np

from qprospect import (
    DensityOperator,
    GeneralizedProposition,
    MultimodeState,
    PovmFamily,
    multimode_probability,
    validate_povm,
)

s2 = 1 / np.sqrt(2)

# prepare the state that *is* the superposition being asked about
b_plus = MultimodeState.in_standard_basis(np.array([s2, s2]), "B+")
rho = DensityOperator(np.outer(b_plus.vector(), b_plus.vector().conj()))

split = multimode_probability(rho, b_plus)
print("state = |B+>, event = B+:")
print(f"  p = {split.p}  classical = {split.classical}  quantum = {split.quantum}")
print("  interference doubles the classical estimate")

b_minus = MultimodeState.in_standard_basis(np.array([s2, -s2]), "B-")
split = multimode_probability(rho, b_minus)
print("state = |B+>, event = B-:")
print(f"  p = {split.p}  classical = {split.classical}  quantum = {split.quantum}")
print("  destructive interference erases the event entirely")

print()
print("unnormalized superpositions scale the window to [0, <B|B>]:")
heavy = MultimodeState.in_standard_basis(np.array([2.0, 2.0]), "heavy")
split = multimode_probability(rho, heavy)
print(f"  <B|B> = {heavy.gram()}  p = {split.p}")

print()
print("=== families of propositions that resolve the identity ===")
# four rank-one members built from two mutually unbiased bases,
# each scaled down so the family sums to the identity
vectors = [
    np.array([1.0, 0.0]),
    np.array([0.0, 1.0]),
    np.array([s2, s2]),
    np.array([s2, -s2]),
]
members = [
    GeneralizedProposition(np.outer(v, v.conj()) / 2.0) for v in vectors
]
family = PovmFamily(tuple(members))
report = validate_povm(family.members, rho)
print("resolution residual:", report.residual)
print("member probabilities:", report.probabilities)
print("they sum to", report.total_probability)

# without the 1/2 scaling the same vectors over-resolve the identity
overweight = [GeneralizedProposition(np.outer(v, v.conj())) for v in vectors]
print("unscaled family residual:", validate_povm(overweight).residual)
