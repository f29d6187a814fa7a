"""Probabilities of separate and consecutive measurements.

Separate events follow the Born rule.  Consecutive events come in three
flavors: the transition probability between eigenmodes (state-independent,
doubly stochastic), the sequential joint distribution obtained by reducing
the state on the first outcome and then measuring the second, and the
complex-valued time-ordered form whose imaginary part witnesses the
incompatibility of the two observables.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import policy, qcore
from .events import DensityOperator, Observable, projector_of
from .errors import (
    DimensionMismatchError,
    NumericContractError,
    ValidationError,
    ZeroProbabilityError,
)


def _check_dims(rho: DensityOperator, obs: Observable):
    if rho.dim != obs.dim:
        raise DimensionMismatchError(
            f"density operator dim {rho.dim} vs observable {obs.label!r} dim {obs.dim}"
        )


def born_probability(rho: DensityOperator, obs: Observable, n: int) -> float:
    """Probability ``<n|rho|n>`` of the single event ``A_n``."""
    _check_dims(rho, obs)
    v = obs.vector(n)
    raw = complex(np.vdot(v, rho.matrix @ v))
    return qcore.real_probability(raw, f"p({obs.label}_{n})")


def born_distribution(rho: DensityOperator, obs: Observable) -> np.ndarray:
    """All event probabilities of one observable, in index order."""
    return np.array([born_probability(rho, obs, n) for n in range(obs.dim)])


def expected_value(rho: DensityOperator, obs: Observable) -> float:
    """Mean outcome ``sum_n p(A_n) A_n``, cross-checked against ``Tr(rho A)``."""
    probs = born_distribution(rho, obs)
    value = float(probs @ obs.eigenvalues)
    direct = np.trace(rho.matrix @ obs.operator())
    if abs(direct - value) > 1e-10 * max(1.0, np.abs(obs.eigenvalues).max()):
        raise NumericContractError(
            f"expected value paths disagree: {value!r} vs {direct!r}"
        )
    return value


def most_probable(rho: DensityOperator, obs: Observable) -> int:
    """Index of the most probable event; ties go to the lowest index."""
    return int(np.argmax(born_distribution(rho, obs)))


def disjoint_union_probability(
    rho: DensityOperator, obs: Observable, indices: Sequence[int]
) -> float:
    """Probability of a union of distinct events of one observable.

    Distinct events of a nondegenerate observable are mutually exclusive,
    so their probabilities add.  Repeated indices are rejected rather than
    deduplicated: the union of an event with itself is that event, and a
    caller passing duplicates has a bookkeeping bug worth surfacing.
    """
    indices = list(indices)
    if not indices:
        raise ValidationError("union of no events")
    if len(set(indices)) != len(indices):
        raise ValidationError(f"duplicate event indices in union: {sorted(indices)}")
    total = sum(born_probability(rho, obs, n) for n in indices)
    return qcore.real_probability(total, "union probability")


def luders_reduce(rho: DensityOperator, obs: Observable, n: int) -> DensityOperator:
    """State after the event ``A_n`` was observed: ``P rho P / Tr(rho P)``."""
    _check_dims(rho, obs)
    p = born_probability(rho, obs, n)
    if p <= policy.ZERO_EVENT_TOL:
        raise ZeroProbabilityError(
            f"cannot reduce on {obs.label}_{n}: probability {p!r} is numerically zero"
        )
    proj = projector_of(obs, n).matrix
    return DensityOperator(proj @ rho.matrix @ proj / p)


@dataclass(frozen=True)
class MeasurementOutcome:
    """One observed event together with its probability and reduced state."""

    event: tuple[str, int]
    probability: float
    post_state: DensityOperator


def apply_measurement(rho: DensityOperator, obs: Observable, n: int) -> MeasurementOutcome:
    """Observe event ``A_n``: bundle its probability with the reduced state."""
    return MeasurementOutcome(
        (obs.label, n), born_probability(rho, obs, n), luders_reduce(rho, obs, n)
    )


def luders_transition(obs_a: Observable, n: int, obs_b: Observable, alpha: int) -> float:
    """Transition probability ``|<n|alpha>|^2`` between eigenmodes.

    State-independent and symmetric in its two events; rows and columns of
    the full table each sum to one.
    """
    if obs_a.dim != obs_b.dim:
        raise DimensionMismatchError(
            f"observables {obs_a.label!r} ({obs_a.dim}) and {obs_b.label!r} "
            f"({obs_b.dim}) act on different spaces"
        )
    amp = complex(np.vdot(obs_a.vector(n), obs_b.vector(alpha)))
    return qcore.real_probability(abs(amp) ** 2, "transition probability")


def transition_matrix(obs_a: Observable, obs_b: Observable) -> np.ndarray:
    """Full doubly stochastic table, row ``n`` and column ``alpha``."""
    if obs_a.dim != obs_b.dim:
        raise DimensionMismatchError(
            f"observables {obs_a.label!r} and {obs_b.label!r} act on different spaces"
        )
    overlaps = obs_a.eigenbasis.conj().T @ obs_b.eigenbasis
    return np.abs(overlaps) ** 2


def wigner_distribution(
    rho: DensityOperator, obs_a: Observable, n: int, obs_b: Observable, alpha: int
) -> float:
    """Sequential joint probability of observing ``B_alpha`` then ``A_n``.

    Computed directly as ``Tr(rho P_alpha P_n P_alpha)``, which factors into
    the transition probability times the probability of the first event.
    """
    _check_dims(rho, obs_a)
    _check_dims(rho, obs_b)
    pa = projector_of(obs_b, alpha).matrix
    pn = projector_of(obs_a, n).matrix
    raw = complex(np.trace(rho.matrix @ pa @ pn @ pa))
    return qcore.real_probability(raw, "sequential probability")


def kirkwood_form(
    rho: DensityOperator, obs_a: Observable, n: int, obs_b: Observable, alpha: int
) -> complex:
    """Time-ordered expectation ``Tr(rho P_n P_alpha)``.

    Complex in general: the imaginary part vanishes for compatible
    observables and witnesses their incompatibility otherwise.  The full
    table sums to one over both indices.
    """
    _check_dims(rho, obs_a)
    _check_dims(rho, obs_b)
    pn = projector_of(obs_a, n).matrix
    pa = projector_of(obs_b, alpha).matrix
    return complex(np.trace(rho.matrix @ pn @ pa))


def wigner_table(rho: DensityOperator, obs_a: Observable, obs_b: Observable) -> np.ndarray:
    """All sequential probabilities at once, indexed ``[n, alpha]``.

    Rows sum to the marginal second-step distribution, columns to the
    first-step Born distribution, and the whole table to one.
    """
    return np.array(
        [
            [wigner_distribution(rho, obs_a, n, obs_b, alpha) for alpha in range(obs_b.dim)]
            for n in range(obs_a.dim)
        ]
    )


def kirkwood_table(rho: DensityOperator, obs_a: Observable, obs_b: Observable) -> np.ndarray:
    """All time-ordered quasiprobabilities at once, indexed ``[n, alpha]``."""
    return np.array(
        [
            [kirkwood_form(rho, obs_a, n, obs_b, alpha) for alpha in range(obs_b.dim)]
            for n in range(obs_a.dim)
        ]
    )


def identity_chain_residual(
    rho: DensityOperator, obs_a: Observable, n: int, obs_b: Observable
) -> float:
    """Residual of resolving one event through a complete second observable.

    Inserting the resolution of unity of ``B`` twice around ``P_n`` splits
    ``p(A_n)`` into the sequential terms (diagonal in ``B``) plus the
    off-diagonal cross terms.  The three pieces are computed along
    independent routes; their mismatch is returned and should sit at
    rounding level for valid inputs.
    """
    _check_dims(rho, obs_a)
    _check_dims(rho, obs_b)
    lhs = born_probability(rho, obs_a, n)
    diagonal = sum(
        wigner_distribution(rho, obs_a, n, obs_b, alpha) for alpha in range(obs_b.dim)
    )
    # cross terms via amplitudes: Tr(rho P_a P_n P_b) = <b|rho|a><a|n><n|b>
    m = obs_b.eigenbasis.conj().T @ rho.matrix @ obs_b.eigenbasis
    w = obs_b.eigenbasis.conj().T @ obs_a.vector(n)
    table = m.T * np.outer(w, w.conj())
    cross = complex(table.sum() - np.trace(table))
    return float(abs(lhs - diagonal - cross))
