"""Composite systems: joint events, marginals, and uncertain prospects.

When the second factor's outcome is uncertain -- a superposition |B> of
its modes rather than a sharp reading -- the probability of "A_n and B"
splits into a classical part plus an interference term.  Conditioning
the whole lattice on the event B restores a proper distribution whose
interference contributions cancel exactly.
"""

import numpy as np

from qprospect import (
    CompositeState,
    MultimodeState,
    Prospect,
    bayes_conditional,
    conditional_under_uncertainty,
    joint_table,
    marginals,
    prospect_lattice,
)

# a correlated pure state: amplitudes c[n, alpha] with sum |c|^2 = 1
c = np.array([[1.0, 1.0], [0.0, 1.0]]) / np.sqrt(3)
state = CompositeState.from_amplitudes(c)

print("joint probabilities p(A_n, B_alpha) = |c[n, alpha]|^2:")
print(joint_table(state))
pa, pb = marginals(state)
print("marginal over A:", pa)
print("marginal over B:", pb)
print("Bayes: p(A=0 | B=1) =", bayes_conditional(state, 0, 1))

print()
print("now leave the second factor uncertain: B = (|0> + |1>)/sqrt(2)")
b = MultimodeState.in_standard_basis(np.array([1.0, 1.0]) / np.sqrt(2))

print()
print("raw prospect probabilities (no conditioning):")
for entry in prospect_lattice(state, b, normalize=False):
    print(f"  p = {entry.p:.6f}  classical = {entry.f:.6f}  "
          f"interference = {entry.q:+.6f}")
print("raw entries satisfy p = f + q but do not sum to one:")
raw = prospect_lattice(state, b, normalize=False)
print("  sum p =", sum(e.p for e in raw))

print()
print("conditioned on the event B, the lattice is a distribution:")
for n, entry in enumerate(prospect_lattice(state, b)):
    print(f"  p({n} | B) = {entry.p:.6f}  classical = {entry.f:.6f}  "
          f"interference = {entry.q:+.6f}")
norm = prospect_lattice(state, b)
print("  sum p =", sum(e.p for e in norm))
print("  sum of interference terms =", sum(e.q for e in norm))

print()
print("the conditional route agrees:")
print("  p(A=0 | B) =", conditional_under_uncertainty(state, Prospect(0, b)))

print()
print("a single-mode 'superposition' falls back to ordinary Bayes:")
e1 = MultimodeState.in_standard_basis(np.array([0.0, 1.0]))
print("  p(A=0 | B=mode 1) =", conditional_under_uncertainty(state, Prospect(0, e1)))
print("  bayes_conditional   =", bayes_conditional(state, 0, 1))
