"""Probabilities of single measurement events.

A state assigns each outcome of an observable a probability through its
density operator: p(A_n) = <n|rho|n>.  This script walks through the
basic calculus on a qubit and a qutrit: full distributions, expected
values along two independent routes, the most probable event, and the
additivity of disjoint outcomes.
"""

import numpy as np

from qprospect import (
    DensityOperator,
    Observable,
    born_distribution,
    born_probability,
    disjoint_union_probability,
    expected_value,
    most_probable,
)

s2 = 1 / np.sqrt(2)

print("=== a qubit in the |+> state, measured in the computational basis ===")
plus = DensityOperator.from_pure(np.array([s2, s2]))
z = Observable([0.0, 1.0], np.eye(2), "Z")
print("p(Z=0) =", born_probability(plus, z, 0))
print("p(Z=1) =", born_probability(plus, z, 1))

print()
print("=== the same state measured along its own axis is deterministic ===")
x = Observable([1.0, -1.0], np.array([[s2, s2], [s2, -s2]]), "X")
print("p(X=+1) =", born_probability(plus, x, 0))
print("p(X=-1) =", born_probability(plus, x, 1))

print()
print("=== a mixed qutrit ===")
rho = DensityOperator(np.diag([0.5, 0.3, 0.2]).astype(complex))
n = Observable.standard(3, "N")
print("distribution:", born_distribution(rho, n))
print("most probable outcome index:", most_probable(rho, n))

# the expected value can be computed from the distribution or straight
# from the operator; the library cross-checks the two internally
print("expected value <N> =", expected_value(rho, n))
print("by hand:", float(np.dot(born_distribution(rho, n), n.eigenvalues)))

print()
print("=== disjoint events add ===")
p01 = disjoint_union_probability(rho, n, [0, 1])
print("p(N=0 or N=1) =", p01)
print("p(N=0) + p(N=1) =", born_probability(rho, n, 0) + born_probability(rho, n, 1))
print("union over all outcomes =", disjoint_union_probability(rho, n, [0, 1, 2]))
