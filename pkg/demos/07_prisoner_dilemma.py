"""The disjunction effect in a prisoner-dilemma experiment.

Participants defect far less against an unknown opponent than classical
probability predicts from their behavior against known opponents.  The
quantum account treats "the opponent's move is uncertain" as a genuine
superposition: the decision probabilities acquire an interference term.
With no prior information the magnitude of that term has a canonical
value of 1/4, and subtracting it from the classically favored action
reproduces the experimental numbers to two decimals.
"""

import numpy as np

from qprospect import (
    GameSpec,
    InterferenceDistribution,
    broken_symmetry_probabilities,
    classical_prospects,
    monte_carlo_cohort,
    quarter_law,
)

# measured joint frequencies: rows = my action (cooperate, defect),
# columns = opponent's action, from the known-opponent sessions
spec = GameSpec(np.array([[0.05, 0.05], [0.45, 0.45]]), payoffs=(3, 0, 5, 1))

f = classical_prospects(spec)
print("classical prospect probabilities (opponent unknown, no interference):")
print(f"  cooperate: {f[0]}   defect: {f[1]}")
print("experiment says roughly (0.37, 0.63) -- far from (0.1, 0.9)")

print()
print("the non-informative interference magnitude:")
uniform = InterferenceDistribution.uniform()
q_plus, q_minus = quarter_law(uniform)
print(f"  E[q | q > 0] = {q_plus}   E[q | q < 0] = {q_minus}")

# a tent-shaped density gives a smaller magnitude
tent_grid = np.linspace(-1.0, 1.0, 2001)
tent = InterferenceDistribution.tabulated(tent_grid, 1.0 - np.abs(tent_grid))
print("  tent-shaped density instead:", quarter_law(tent)[0], "(= 1/6)")

print()
print("breaking the symmetry toward cooperation:")
result = broken_symmetry_probabilities(f, q_plus, favored="cooperate",
                                       empirical_reference=(0.37, 0.63))
print(f"  p = {result.p}")
print(f"  deviation from experiment: {result.deviations()}")

print()
print("a cohort of simulated participants, each drawing its own q:")
report = monte_carlo_cohort(spec, uniform, n_pairs=200_000,
                            symmetry="broken", seed=42)
print(f"  mean q = {report.mean_q:.4f} +- {report.q_stderr:.4f}")
print(f"  cooperation fraction = {report.cooperation_fraction:.4f}")

print()
print("with the symmetry intact the interference washes out on average:")
report = monte_carlo_cohort(spec, uniform, n_pairs=200_000,
                            symmetry="intact", seed=42)
print(f"  mean q = {report.mean_q:.5f} +- {report.q_stderr:.5f}")
