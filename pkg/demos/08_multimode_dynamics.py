"""Multimode dynamics and two-time prospect probabilities.

A piecewise-constant generator drives population between modes.  The
two-time amplitude matrix c[n, alpha] collects, for every start mode
alpha, the amplitude to arrive in mode n -- so questions like "was the
system in superposition B at t0 and in mode n at t?" become prospect
probabilities with an interference part, exactly as for composite
systems.
"""

import numpy as np

from qprospect import (
    HamiltonianSpec,
    MultimodeState,
    WaveState,
    amplitude_matrix,
    evolve_state,
    occupation_residual,
    two_time_prospect,
)

g = 0.7
drive = HamiltonianSpec(
    np.zeros((2, 2)),
    pieces=((0.0, np.array([[0.0, g], [g, 0.0]])),),
)

print("resonant two-mode exchange, g =", g)
psi0 = WaveState(np.array([1.0, 0.0]), 0.0)
for t in np.linspace(0.0, np.pi / g, 7):
    psi = evolve_state(psi0, drive, t)
    occ = np.abs(psi.coefficients) ** 2
    print(f"  t = {t:6.3f}   occupations = {occ[0]:.4f} {occ[1]:.4f}"
          f"   sin^2(gt) = {np.sin(g * t) ** 2:.4f}")

print()
print("switching the drive on only for a window [0.5, 2.5]:")
windowed = HamiltonianSpec(
    np.zeros((2, 2)),
    pieces=(
        (0.5, np.array([[0.0, g], [g, 0.0]])),
        (2.5, np.zeros((2, 2))),
    ),
)
for t in (0.0, 0.5, 1.5, 2.5, 4.0):
    psi = evolve_state(psi0, windowed, t)
    print(f"  t = {t:4.1f}   |c1|^2 = {abs(psi.coefficients[1]) ** 2:.6f}")
print("nothing moves before the window opens or after it closes")

print()
print("=== two-time questions ===")
t0, t = 0.0, 1.2
amp = amplitude_matrix(psi0, drive, t0, t)
print("amplitude matrix |c[n, alpha]|^2 (column alpha = start mode):")
print(np.abs(amp.c) ** 2)

# a superposition at t0 interferes; a start in a sharp mode cannot
b = MultimodeState.in_standard_basis(np.array([1.0, 1.0]) / np.sqrt(2))
for n in (0, 1):
    entry = two_time_prospect(amp, n, b)
    print(f"  mode {n} at t, B+ at t0:  p = {entry.p:.6f}  "
          f"f = {entry.f:.6f}  q = {entry.q:+.6f}")

print()
print("the occupation residual measures how much a *coherent* start")
print("state's final occupations differ from the classical mixture of")
print("per-mode evolutions:")
coherent = WaveState(np.array([0.8, 0.6j]), 0.0)
detuned = HamiltonianSpec(
    np.diag([0.0, 1.5]),
    pieces=((0.0, np.array([[0.0, g], [g, 0.0]])),),
)
amp = amplitude_matrix(coherent, detuned, 0.0, 2.0)
final = evolve_state(coherent, detuned, 2.0)
print("  residual:", occupation_residual(amp, final))
basis_start = WaveState(np.array([1.0, 0.0]), 0.0)
amp = amplitude_matrix(basis_start, detuned, 0.0, 2.0)
final = evolve_state(basis_start, detuned, 2.0)
print("  for a sharp start it vanishes:", occupation_residual(amp, final))
