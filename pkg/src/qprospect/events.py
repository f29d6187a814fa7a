"""Events and the operators that test them.

An event is a possible outcome of measuring an observable; it is tested
by the projector on the corresponding eigenvector.  A multimode state
is a weighted superposition of basis modes ``|B> = sum_a b_a |a>`` whose
coefficient vector need not be normalized; it induces a rank-one
generalized proposition ``|B><B|``.  Families of generalized propositions
that resolve the identity form a positive operator-valued measure.
"""

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import policy, qcore
from .errors import DimensionMismatchError, NumericContractError, ValidationError


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Observable:
    """Nondegenerate observable: real outcome values and an orthonormal eigenbasis.

    Parameters
    ----------
    eigenvalues : array_like
        Real outcome values, pairwise distinct.
    eigenbasis : array_like
        Square complex matrix whose *columns* are the eigenvectors, in the
        same order as ``eigenvalues``.
    label : str
        Short name used in diagnostics and result tables.
    """

    eigenvalues: np.ndarray
    eigenbasis: np.ndarray
    label: str = "A"

    def __post_init__(self):
        basis = np.array(qcore.as_complex_matrix(self.eigenbasis, "eigenbasis"))
        values = np.array(self.eigenvalues, dtype=float).reshape(-1)
        if values.size != basis.shape[0]:
            raise DimensionMismatchError(
                f"{values.size} eigenvalues vs eigenbasis of dimension {basis.shape[0]}"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("eigenvalues must be finite")
        gaps = np.abs(values[:, None] - values[None, :])
        gaps[np.diag_indices_from(gaps)] = np.inf
        if gaps.min() <= policy.EIGENVALUE_GAP:
            raise ValidationError(
                f"observable {self.label!r} is degenerate: eigenvalue gap "
                f"{gaps.min():.3e} at or below {policy.EIGENVALUE_GAP:.0e}"
            )
        qcore.require_unitary(basis, f"eigenbasis of {self.label!r}")
        object.__setattr__(self, "eigenvalues", _freeze(values))
        object.__setattr__(self, "eigenbasis", _freeze(basis))

    @property
    def dim(self) -> int:
        return self.eigenbasis.shape[0]

    def vector(self, n: int) -> np.ndarray:
        """Eigenvector for outcome index ``n``."""
        if not 0 <= n < self.dim:
            raise ValidationError(f"outcome index {n} out of range for dim {self.dim}")
        return self.eigenbasis[:, n]

    def operator(self) -> np.ndarray:
        """Dense Hermitian matrix ``sum_n A_n |n><n|``."""
        return (self.eigenbasis * self.eigenvalues) @ self.eigenbasis.conj().T

    @classmethod
    def standard(cls, dim: int, label: str = "N", eigenvalues=None) -> "Observable":
        """Observable diagonal in the computational basis (values 0..dim-1)."""
        if eigenvalues is None:
            eigenvalues = np.arange(dim, dtype=float)
        return cls(eigenvalues, np.eye(dim, dtype=complex), label)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Statistical operator: Hermitian, unit trace, positive-semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(qcore.require_hermitian(self.matrix, "density operator"))
        tol = policy.tolerance()
        tr = m.trace()
        if abs(tr - 1.0) > tol:
            raise ValidationError(
                f"density operator breaks unit trace: Tr = {float(tr.real)!r} "
                f"(deviation {abs(tr - 1.0):.3e} exceeds {tol:.1e})"
            )
        w = np.linalg.eigvalsh(m)
        if w.min() < -tol:
            raise ValidationError(
                f"density operator not positive-semidefinite: "
                f"lowest eigenvalue {w.min():.3e}"
            )
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    @classmethod
    def from_pure(cls, vector) -> "DensityOperator":
        v = qcore.as_complex_vector(vector, "state vector")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > policy.NORM_TOL:
            raise ValidationError(
                f"state vector norm {float(norm)!r} deviates from 1 beyond {policy.NORM_TOL:.0e}"
            )
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True, eq=False)
class Projector:
    """Rank-one projector testing a single event, tagged with its origin."""

    matrix: np.ndarray
    source: tuple[str, int] = ("", -1)

    def __post_init__(self):
        m = np.array(qcore.require_hermitian(self.matrix, "projector"))
        defect = float(np.abs(m @ m - m).max())
        if defect > policy.tolerance():
            raise ValidationError(f"not idempotent: max |P^2 - P| = {defect:.3e}")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def projector_of(obs: Observable, n: int) -> Projector:
    """Projector on the ``n``-th eigenvector of ``obs``."""
    v = obs.vector(n)
    return Projector(np.outer(v, v.conj()), (obs.label, n))


@dataclass(frozen=True, eq=False)
class MultimodeState:
    """Superposition ``|B> = sum_a b_a |a>`` over the eigenmodes of a basis.

    The coefficient vector is *not* required to be normalized; its squared
    norm ``<B|B>`` rescales every operator built from the state.  At least
    one coefficient must be nonzero.
    """

    coefficients: np.ndarray
    basis: Observable

    def __post_init__(self):
        b = np.array(qcore.as_complex_vector(self.coefficients, "coefficients"))
        if b.size != self.basis.dim:
            raise DimensionMismatchError(
                f"{b.size} coefficients vs basis of dimension {self.basis.dim}"
            )
        if not np.any(b != 0):
            raise ValidationError("multimode state needs at least one nonzero coefficient")
        object.__setattr__(self, "coefficients", _freeze(b))

    @property
    def dim(self) -> int:
        return self.basis.dim

    def gram(self) -> float:
        """Squared norm ``<B|B>``."""
        return float(np.vdot(self.coefficients, self.coefficients).real)

    def vector(self) -> np.ndarray:
        """The state expanded in the underlying space."""
        return self.basis.eigenbasis @ self.coefficients

    @classmethod
    def in_standard_basis(cls, coefficients, label: str = "B") -> "MultimodeState":
        b = qcore.as_complex_vector(coefficients, "coefficients")
        return cls(b, Observable.standard(b.size, label))


@dataclass(frozen=True, eq=False)
class GeneralizedProposition:
    """Rank-one positive operator ``|B><B|`` testing a multimode event.

    Unlike a projector it need not be idempotent: ``P^2 = <B|B> P``, so the
    operator carries the weight of its defining state.  Instances may be
    built from a :class:`MultimodeState` or supplied as raw operators, which
    are validated for self-adjointness, positivity, and unit rank.
    """

    operator: np.ndarray

    def __post_init__(self):
        m = np.array(qcore.require_hermitian(self.operator, "generalized proposition"))
        tol = policy.tolerance()
        w = np.linalg.eigvalsh(m)
        if w.min() < -tol:
            raise ValidationError(
                f"generalized proposition not positive: lowest eigenvalue {w.min():.3e}"
            )
        if w.size > 1 and w[-2] > tol * max(1.0, w[-1]):
            raise ValidationError(
                f"generalized proposition has rank > 1: second eigenvalue {w[-2]:.3e}"
            )
        if w[-1] <= tol:
            raise ValidationError("generalized proposition is (numerically) zero")
        object.__setattr__(self, "operator", _freeze(m))

    @property
    def dim(self) -> int:
        return self.operator.shape[0]

    def weight(self) -> float:
        """The scale ``<B|B>`` such that ``P^2 = <B|B> P``."""
        return float(np.trace(self.operator).real)

    @classmethod
    def from_state(cls, state: MultimodeState) -> "GeneralizedProposition":
        v = state.vector()
        return cls(np.outer(v, v.conj()))


class MultimodeProbability(NamedTuple):
    """Probability of a multimode event split into its two contributions."""

    p: float
    classical: float
    quantum: float


def multimode_probability(rho: DensityOperator, state: MultimodeState) -> MultimodeProbability:
    """Probability ``Tr(rho |B><B|)`` of a multimode event, decomposed.

    The classical part keeps only the diagonal ``sum_a |b_a|^2 <a|rho|a>``;
    the quantum part is the interference of distinct modes,
    ``2 Re sum_{a<b} b_a* b_b <a|rho|b>``.  Their sum must reproduce the
    direct expectation within 1e-12, and the total must lie within the
    window ``[0, <B|B>]`` set by the state's squared norm.
    """
    if rho.dim != state.dim:
        raise DimensionMismatchError(
            f"density operator dim {rho.dim} vs multimode state dim {state.dim}"
        )
    b = state.coefficients
    e = state.basis.eigenbasis
    m = e.conj().T @ rho.matrix @ e  # <a|rho|b> in the mode basis
    direct = complex(np.vdot(b, m @ b))

    window = policy.PROBABILITY_TOL * max(1.0, state.gram())
    if abs(direct.imag) > window:
        raise NumericContractError(
            f"multimode probability has imaginary residue {direct.imag:.3e}"
        )
    p = direct.real
    if p < -window or p > state.gram() + window:
        raise NumericContractError(
            f"multimode probability {p!r} outside [0, <B|B>] window"
        )

    classical = float(np.sum(np.abs(b) ** 2 * m.diagonal().real))
    upper = np.triu_indices(state.dim, k=1)
    quantum = float(
        2.0 * np.sum((b.conj()[upper[0]] * b[upper[1]] * m[upper]).real)
    )
    if abs(p - (classical + quantum)) > window:
        raise NumericContractError(
            f"multimode decomposition broken: p - (classical + quantum) = "
            f"{p - (classical + quantum):.3e}"
        )
    p = min(max(p, 0.0), state.gram())
    return MultimodeProbability(p, classical, quantum)


@dataclass(frozen=True)
class PovmReport:
    """Outcome of checking a family of propositions against the identity."""

    residual: float
    passed: bool
    probabilities: tuple[float, ...] | None = None
    total_probability: float | None = None


def validate_povm(
    members: Sequence[GeneralizedProposition],
    rho: DensityOperator | None = None,
) -> PovmReport:
    """Check that a family of generalized propositions resolves the identity.

    The residual is the max-abs entry of ``sum_B P_B - 1``; the family
    passes when it stays within 1e-8.  With a density operator supplied the
    report also carries each member's probability ``Tr(rho P_B)`` and their
    total, which approaches 1 exactly as well as the family resolves unity.
    """
    members = tuple(members)
    if not members:
        raise ValidationError("empty proposition family")
    dim = members[0].dim
    for k, member in enumerate(members):
        if member.dim != dim:
            raise DimensionMismatchError(
                f"family member {k} has dimension {member.dim}, expected {dim}"
            )
    total = sum(member.operator for member in members)
    residual = float(np.abs(total - np.eye(dim)).max())
    passed = residual <= policy.POVM_TOL

    probabilities = None
    total_probability = None
    if rho is not None:
        if rho.dim != dim:
            raise DimensionMismatchError(
                f"density operator dim {rho.dim} vs family dimension {dim}"
            )
        raw = [complex(np.trace(rho.matrix @ member.operator)) for member in members]
        for value in raw:
            if abs(value.imag) > policy.PROBABILITY_TOL:
                raise NumericContractError(
                    f"member probability has imaginary residue {value.imag:.3e}"
                )
        probabilities = tuple(max(value.real, 0.0) for value in raw)
        total_probability = float(sum(probabilities))
    return PovmReport(residual, passed, probabilities, total_probability)


@dataclass(frozen=True, eq=False)
class PovmFamily:
    """Validated positive operator-valued measure over multimode events."""

    members: tuple[GeneralizedProposition, ...]

    def __post_init__(self):
        members = tuple(self.members)
        report = validate_povm(members)
        if not report.passed:
            raise ValidationError(
                f"family breaks the resolution of unity: residual "
                f"{report.residual:.3e} exceeds {policy.POVM_TOL:.0e}"
            )
        object.__setattr__(self, "members", members)

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def __len__(self) -> int:
        return len(self.members)

    @classmethod
    def from_states(cls, states: Sequence[MultimodeState]) -> "PovmFamily":
        return cls(tuple(GeneralizedProposition.from_state(s) for s in states))
