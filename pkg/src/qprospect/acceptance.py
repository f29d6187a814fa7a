"""Self-contained release gate: thirteen numbered checks over the library.

Each criterion function builds its own inputs (fixed seeds throughout),
exercises one advertised behavior, and returns a :class:`CriterionResult`
with the measured numbers in its detail string.  The registry
:data:`ALL_CRITERIA` is consumed both by ``tests/test_acceptance.py`` and
by the ``selftest`` CLI subcommand, so the release gate and the installed
tool can never drift apart.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channels import PipelineStage, pointer_measurer, run_pipeline
from .composite import CompositeState, Prospect, prospect_lattice, prospect_probability
from .composite import bayes_conditional, joint_table, marginals
from .dynamics import HamiltonianSpec, WaveState, amplitude_matrix, evolve_state
from .entangle import bell_state, entanglement_production
from .events import DensityOperator, MultimodeState, Observable
from .game import (
    GameSpec,
    InterferenceDistribution,
    broken_symmetry_probabilities,
    monte_carlo_cohort,
    quarter_law,
)
from .measure import (
    born_distribution,
    identity_chain_residual,
    kirkwood_form,
    transition_matrix,
    wigner_distribution,
)

#: float-representation slack for tolerances stated in decimal (e.g. a
#: deviation that is exactly 0.02 in exact arithmetic may exceed the
#: closest binary 0.02 by ~2e-17)
REPRESENTATION_SLACK = 1e-12


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.number:2d}: {self.name} -- {self.detail}"


def _random_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_density(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T
    return DensityOperator(m / np.trace(m))


def _random_observable(dim, rng, label):
    return Observable(np.arange(dim, dtype=float), _random_unitary(dim, rng), label)


def _random_entangled(dim_a, dim_b, rng):
    c = rng.normal(size=(dim_a, dim_b)) + 1j * rng.normal(size=(dim_a, dim_b))
    return CompositeState.from_amplitudes(c / np.linalg.norm(c))


def criterion_1() -> CriterionResult:
    """Quarter law under the uniform non-informative density."""
    q_plus, q_minus = quarter_law(InterferenceDistribution.uniform())
    err = max(abs(q_plus - 0.25), abs(q_minus + 0.25))
    return CriterionResult(
        1, "quarter law (uniform density)", err <= 1e-10,
        f"(q+, q-) = ({q_plus:.12f}, {q_minus:.12f}), error {err:.2e} (tol 1e-10)",
    )


def criterion_2() -> CriterionResult:
    """Broken-symmetry closed form and its distance from the reference data."""
    result = broken_symmetry_probabilities(
        (0.1, 0.9), 0.25, favored="cooperate", empirical_reference=(0.37, 0.63)
    )
    err = max(abs(result.p[0] - 0.35), abs(result.p[1] - 0.65))
    dev = max(result.deviations())
    passed = err <= 1e-12 and dev <= 0.02 + REPRESENTATION_SLACK
    return CriterionResult(
        2, "broken-symmetry game probabilities", passed,
        f"p = ({result.p[0]:.12f}, {result.p[1]:.12f}), closed-form error "
        f"{err:.2e} (tol 1e-12), deviation from (0.37, 0.63) = {dev:.4f} (tol 0.02)",
    )


def criterion_3() -> CriterionResult:
    """Sampled cohorts agree with the closed form and with zero-mean symmetry."""
    spec = GameSpec(np.array([[0.05, 0.05], [0.45, 0.45]]))
    uniform = InterferenceDistribution.uniform()
    target = broken_symmetry_probabilities((0.1, 0.9), 0.25).p[0]
    broken = monte_carlo_cohort(spec, uniform, n_pairs=1_000_000, seed=20260819)
    gap = abs(broken.cooperation_fraction - target)
    intact = monte_carlo_cohort(
        spec, uniform, n_pairs=1_000_000, symmetry="intact", seed=20260820
    )
    bias = abs(intact.mean_q)
    passed = gap <= 0.002 and bias <= 3.0 * intact.q_stderr
    return CriterionResult(
        3, "Monte Carlo cohort consistency", passed,
        f"broken cohort mean {broken.cooperation_fraction:.6f} vs {target:.2f} "
        f"(gap {gap:.2e}, tol 2e-3); intact |mean q| = {bias:.2e} "
        f"<= 3 x stderr = {3 * intact.q_stderr:.2e}",
    )


def criterion_4() -> CriterionResult:
    """Maximally correlated states produce exactly log M."""
    worst = 0.0
    for m in range(2, 9):
        report = entanglement_production(bell_state(m))
        worst = max(worst, abs(report.epsilon - math.log(m)))
    two = entanglement_production(bell_state(2)).epsilon
    passed = worst <= 1e-12 and abs(two - 0.6931471805599453) <= 1e-12
    return CriterionResult(
        4, "Bell-family entanglement production", passed,
        f"max |eps - log M| = {worst:.2e} over M = 2..8 (tol 1e-12); "
        f"eps(M=2) = {two:.12f}",
    )


def criterion_5() -> CriterionResult:
    """Correlation without interference: uniform prospects on Bell states."""
    worst_q = 0.0
    min_eps = math.inf
    for m in range(2, 9):
        state = bell_state(m)
        b = MultimodeState.in_standard_basis(np.ones(m))
        for n in range(m):
            out = prospect_probability(state, Prospect(n, b), normalize=False)
            worst_q = max(worst_q, abs(out.q))
        min_eps = min(min_eps, entanglement_production(state).epsilon)
    passed = worst_q <= 1e-12 and min_eps > 0.0
    return CriterionResult(
        5, "interference-free entangled prospects", passed,
        f"max |q| = {worst_q:.2e} over M = 2..8 (tol 1e-12) "
        f"while eps >= {min_eps:.4f} > 0",
    )


def criterion_6() -> CriterionResult:
    """Two-step transition probabilities are symmetric and doubly stochastic."""
    rng = np.random.default_rng(60)
    worst_sym = 0.0
    worst_sum = 0.0
    for _ in range(100):
        dim = int(rng.integers(2, 9))
        a = _random_observable(dim, rng, "A")
        b = _random_observable(dim, rng, "B")
        t = transition_matrix(a, b)
        worst_sym = max(worst_sym, float(np.abs(t - transition_matrix(b, a).T).max()))
        worst_sum = max(
            worst_sum,
            float(np.abs(t.sum(axis=0) - 1.0).max()),
            float(np.abs(t.sum(axis=1) - 1.0).max()),
        )
    passed = worst_sym <= 1e-14 and worst_sum <= 1e-12
    return CriterionResult(
        6, "transition-probability symmetry", passed,
        f"100 random basis pairs, dims 2-8: max asymmetry {worst_sym:.2e} "
        f"(tol 1e-14), max row/col sum defect {worst_sum:.2e} (tol 1e-12)",
    )


def criterion_7() -> CriterionResult:
    """Compatible observables reduce both sequential forms to the classical ones."""
    rng = np.random.default_rng(70)
    worst_t = 0.0
    worst_w = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 6))
        a = _random_observable(dim, rng, "A")
        rho = _random_density(dim, rng)
        t = transition_matrix(a, a)
        worst_t = max(worst_t, float(np.abs(t - np.eye(dim)).max()))
        first = born_distribution(rho, a)
        for n in range(dim):
            for alpha in range(dim):
                want = first[alpha] if n == alpha else 0.0
                got = wigner_distribution(rho, a, n, a, alpha)
                worst_w = max(worst_w, abs(got - want))
    passed = worst_t <= 1e-12 and worst_w <= 1e-12
    return CriterionResult(
        7, "compatible-observable trivialization", passed,
        f"max |transition - identity| = {worst_t:.2e}, "
        f"max sequential-table defect = {worst_w:.2e} (tol 1e-12 each)",
    )


def criterion_8() -> CriterionResult:
    """Resolving an event through a second observable loses nothing."""
    rng = np.random.default_rng(80)
    worst = 0.0
    for _ in range(100):
        dim = int(rng.integers(2, 9))
        rho = _random_density(dim, rng)
        a = _random_observable(dim, rng, "A")
        b = _random_observable(dim, rng, "B")
        n = int(rng.integers(dim))
        worst = max(worst, identity_chain_residual(rho, a, n, b))
    return CriterionResult(
        8, "identity-chain residual", worst <= 1e-10,
        f"max residual {worst:.2e} over 100 random instances, dims 2-8 (tol 1e-10)",
    )


def criterion_9() -> CriterionResult:
    """Joint tables are proper distributions with consistent marginals."""
    rng = np.random.default_rng(90)
    worst_neg = 0.0
    worst_sum = 0.0
    worst_bayes = 0.0
    worst_marg = 0.0
    for _ in range(100):
        da, db = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        state = CompositeState(_random_density(da * db, rng).matrix, (da, db))
        table = joint_table(state)
        worst_neg = max(worst_neg, float(-table.min()))
        worst_sum = max(worst_sum, abs(float(table.sum()) - 1.0))
        pa, pb = marginals(state)
        worst_marg = max(
            worst_marg,
            float(np.abs(table.sum(axis=1) - pa).max()),
            float(np.abs(table.sum(axis=0) - pb).max()),
        )
        for alpha in range(db):
            total = sum(bayes_conditional(state, n, alpha) for n in range(da))
            worst_bayes = max(worst_bayes, abs(total - 1.0))
    passed = (
        worst_neg <= 0.0
        and worst_sum <= 1e-12
        and worst_bayes <= 1e-10
        and worst_marg <= 1e-12
    )
    return CriterionResult(
        9, "composite probability measure", passed,
        f"min entry >= {-worst_neg:.1e}, max |sum - 1| = {worst_sum:.2e} "
        f"(tol 1e-12), max conditional-sum defect {worst_bayes:.2e} (tol 1e-10), "
        f"max marginal mismatch {worst_marg:.2e} (tol 1e-12)",
    )


def criterion_10() -> CriterionResult:
    """Prospect probabilities decompose exactly and normalize to a lattice."""
    rng = np.random.default_rng(100)
    worst_split = 0.0
    worst_qsum = 0.0
    worst_range = 0.0
    for _ in range(100):
        da, db = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        state = _random_entangled(da, db, rng)
        coeff = rng.normal(size=db) + 1j * rng.normal(size=db)
        b = MultimodeState.in_standard_basis(coeff)
        for n in range(da):
            raw = prospect_probability(state, Prospect(n, b), normalize=False)
            worst_split = max(worst_split, abs(raw.p - (raw.f + raw.q)))
        lattice = prospect_lattice(state, b, normalize=True)
        worst_qsum = max(worst_qsum, abs(sum(v.q for v in lattice)))
        worst_range = max(worst_range, max(abs(v.q) for v in lattice))
    passed = worst_split <= 1e-12 and worst_qsum <= 1e-10 and worst_range <= 1.0
    return CriterionResult(
        10, "prospect interference decomposition", passed,
        f"max |p - (f + q)| = {worst_split:.2e} (tol 1e-12), max |sum q| = "
        f"{worst_qsum:.2e} (tol 1e-10), max |q| = {worst_range:.3f} <= 1",
    )


def criterion_11() -> CriterionResult:
    """The pointer pipeline keeps the measured distribution intact."""
    rng = np.random.default_rng(110)
    meas = pointer_measurer()
    worst_diag = 0.0
    for _ in range(20):
        rho = _random_density(2, rng)
        for t in (np.pi / 4, np.pi / 2):
            trace = run_pipeline(
                rho, meas,
                [PipelineStage("compose"), PipelineStage("evolve", duration=t),
                 PipelineStage("readout")],
            )
            worst_diag = max(
                worst_diag,
                float(np.abs(trace.rho_a.matrix.diagonal().real
                             - rho.matrix.diagonal().real).max()),
            )
    rho = _random_density(2, rng)
    idle = run_pipeline(
        rho, meas,
        [PipelineStage("compose"), PipelineStage("evolve", duration=0.0),
         PipelineStage("readout")],
    )
    worst_idle = float(np.abs(idle.rho_a.matrix - rho.matrix).max())
    passed = worst_diag <= 1e-10 and worst_idle <= 1e-12
    return CriterionResult(
        11, "pointer-pipeline fidelity", passed,
        f"max diagonal drift {worst_diag:.2e} (tol 1e-10), zero-duration "
        f"identity defect {worst_idle:.2e} (tol 1e-12)",
    )


def criterion_12() -> CriterionResult:
    """Exact two-mode exchange dynamics and amplitude-matrix unitarity."""
    g = 0.7
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    h = HamiltonianSpec(np.zeros((2, 2)), pieces=((0.0, g * sx),))
    psi = WaveState(np.array([1.0, 0.0]))
    worst_rabi = 0.0
    for t in np.linspace(0.0, 8.0, 50):
        out = evolve_state(psi, h, t)
        worst_rabi = max(worst_rabi, abs(out.occupations()[1] - np.sin(g * t) ** 2))
    rng = np.random.default_rng(120)
    c0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    h4 = rng.normal(size=(4, 4))
    spec4 = HamiltonianSpec((h4 + h4.T) / 2.0)
    start = WaveState(c0 / np.linalg.norm(c0))
    amp = amplitude_matrix(start, spec4, 0.5, 2.5)
    at_start = evolve_state(start, spec4, 0.5)
    worst_col = float(
        np.abs(np.sum(np.abs(amp.c) ** 2, axis=0) - at_start.occupations()).max()
    )
    passed = worst_rabi <= 1e-8 and worst_col <= 1e-10
    return CriterionResult(
        12, "two-mode exchange dynamics", passed,
        f"max |occupation - sin^2(gt)| = {worst_rabi:.2e} at 50 times (tol 1e-8); "
        f"column-norm identity defect {worst_col:.2e} (tol 1e-10)",
    )


def criterion_13() -> CriterionResult:
    """A stored instance where the time-ordered form is visibly complex."""
    rho = DensityOperator(np.diag([1.0, 0.0]))
    y_basis = np.array([[1.0, 1.0], [-1j, 1j]]) / np.sqrt(2.0)
    y = Observable(np.array([1.0, -1.0]), y_basis, "Y")
    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    x = Observable(np.array([1.0, -1.0]), hadamard, "X")
    value = kirkwood_form(rho, y, 0, x, 0)
    passed = abs(value.imag) > 0.01
    return CriterionResult(
        13, "complex time-ordered witness", passed,
        f"<P_n P_alpha> = {value.real:.4f} {value.imag:+.4f}j, "
        f"|Im| = {abs(value.imag):.4f} > 0.01",
    )


ALL_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
    criterion_13,
)


def run_all() -> list[CriterionResult]:
    """Evaluate every criterion; failures are results, not exceptions."""
    results = []
    for func in ALL_CRITERIA:
        try:
            results.append(func())
        except Exception as exc:  # pragma: no cover - defensive for selftest
            number = int(func.__name__.rsplit("_", 1)[1])
            results.append(
                CriterionResult(number, func.__name__, False, f"raised {exc!r}")
            )
    return results
