"""How much entanglement does a composite state's preparation produce?

The measure compares a matrix norm of the joint state against the
product of the same norm on its reductions, on a log scale.  Product
states score exactly zero; maximally correlated M-level pairs score
log M.  Two norms are reported: the largest diagonal element in the
measurement basis (the headline number) and the spectral norm.
"""

import numpy as np

from qprospect import (
    CompositeState,
    DensityOperator,
    MultimodeState,
    bell_state,
    entanglement_production,
    prospect_lattice,
)

print("=== the maximally correlated family ===")
for m in (2, 3, 4, 8):
    report = entanglement_production(bell_state(m))
    print(f"M = {m}:  eps = {report.epsilon:.12f}   log M = {np.log(m):.12f}")

report = entanglement_production(bell_state(4), log_base=2)
print("M = 4 in bits:", report.epsilon, "(spectral route:", report.epsilon_spectral, ")")

print()
print("=== product states score zero under both norms ===")
rho_a = DensityOperator(np.diag([0.7, 0.3]).astype(complex))
rho_b = DensityOperator(np.diag([0.2, 0.8]).astype(complex))
product = CompositeState.product(rho_a, rho_b)
report = entanglement_production(product)
print("eps =", report.epsilon, "  eps_spectral =", report.epsilon_spectral)
print("norms (joint, first, second):", report.norms)

print()
print("=== entanglement is necessary for prospect interference... ===")
c = np.array([[1.0, 1.0], [0.0, 1.0]]) / np.sqrt(3)
state = CompositeState.from_amplitudes(c)
b = MultimodeState.in_standard_basis(np.array([1.0, 1.0]) / np.sqrt(2))
report = entanglement_production(state)
lattice = prospect_lattice(state, b)
print("correlated state: eps_spectral =", report.epsilon_spectral)
print("  interference terms:", [round(e.q, 6) for e in lattice])

print()
print("=== ...but not sufficient ===")
bell = bell_state(2)
report = entanglement_production(bell)
lattice = prospect_lattice(bell, b)
print("bell pair: eps =", report.epsilon)
print("  interference terms:", [round(e.q, 6) for e in lattice])
print("maximal entanglement, yet every interference term vanishes")
