"""Composite events and prospect probabilities.

A composite state lives on the tensor product of two measured spaces and
is written in the product of the two measurement eigenbases, the first
factor owning the slow index.  Elementary joint events ``A_n (x) B_alpha``
have the diagonal elements as probabilities.  A *prospect* pairs a sharp
event in the first factor with a multimode event in the second; its
probability splits into a classical (diagonal) part and an interference
part contributed by distinct-mode coherences.

Because the prospect operators for a fixed multimode event resolve only
``1_A (x) P_B`` rather than the full identity, raw prospect probabilities
over a lattice do not sum to one.  The ``normalize`` flag conditions the
lattice on the multimode event: probabilities are rescaled by their sum,
the classical parts by theirs, and the interference part is the exact
difference, which makes the lattice a proper distribution whose classical
part is itself a distribution and whose interference terms sum to zero.
"""

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import policy, qcore
from .errors import (
    DimensionMismatchError,
    NumericContractError,
    ValidationError,
    ZeroProbabilityError,
)
from .events import DensityOperator, MultimodeState, multimode_probability


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CompositeState:
    """Density operator on a bipartite space with factor dimensions ``dims``."""

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        da, db = int(self.dims[0]), int(self.dims[1])
        if da < 1 or db < 1:
            raise ValidationError(f"factor dimensions must be positive, got {self.dims}")
        m = np.array(qcore.require_hermitian(self.matrix, "composite state"))
        if m.shape[0] != da * db:
            raise DimensionMismatchError(
                f"matrix dimension {m.shape[0]} does not match dims {da} x {db}"
            )
        tol = policy.tolerance()
        tr = m.trace()
        if abs(tr - 1.0) > tol:
            raise ValidationError(
                f"composite state breaks unit trace: Tr = {float(tr.real)!r}"
            )
        w = np.linalg.eigvalsh(m)
        if w.min() < -tol:
            raise ValidationError(
                f"composite state not positive-semidefinite: "
                f"lowest eigenvalue {w.min():.3e}"
            )
        object.__setattr__(self, "matrix", _freeze(m))
        object.__setattr__(self, "dims", (da, db))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def block(self, m: int, n: int) -> np.ndarray:
        """The ``<m .| rho |n .>`` block, a ``db x db`` matrix over the second factor."""
        da, db = self.dims
        if not (0 <= m < da and 0 <= n < da):
            raise ValidationError(f"block indices ({m}, {n}) out of range for dim {da}")
        return self.matrix[m * db:(m + 1) * db, n * db:(n + 1) * db]

    def element(self, m: int, alpha: int, n: int, beta: int) -> complex:
        """Matrix element ``<m alpha| rho |n beta>``."""
        da, db = self.dims
        return complex(self.matrix[m * db + alpha, n * db + beta])

    def reduced(self, keep: int) -> DensityOperator:
        """Reduced state of one factor (0 keeps the first, 1 the second)."""
        return DensityOperator(qcore.partial_trace(self.matrix, self.dims, keep))

    def as_density(self) -> DensityOperator:
        return DensityOperator(self.matrix)

    @classmethod
    def from_amplitudes(cls, c) -> "CompositeState":
        """Pure composite state from an amplitude matrix ``c[n, alpha]``.

        The flattened amplitudes are the coefficients of the state in the
        ``|n alpha>`` basis, so the density matrix elements are
        ``c[m, a] * conj(c[n, b])``.  Total squared amplitude must be one.
        """
        c = np.asarray(c, dtype=complex)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise DimensionMismatchError(
                f"amplitude matrix must be 2-d, got shape {c.shape}"
            )
        if not (np.all(np.isfinite(c.real)) and np.all(np.isfinite(c.imag))):
            raise ValidationError("amplitude matrix has non-finite entries")
        total = float(np.sum(np.abs(c) ** 2))
        if abs(total - 1.0) > policy.tolerance():
            raise ValidationError(
                f"amplitude matrix breaks unit total weight: sum |c|^2 = {total!r}"
            )
        v = c.reshape(-1)
        return cls(np.outer(v, v.conj()), c.shape)

    @classmethod
    def product(cls, rho_a: DensityOperator, rho_b: DensityOperator) -> "CompositeState":
        """Uncorrelated composite state of two factors."""
        return cls(
            qcore.tensor_product(rho_a.matrix, rho_b.matrix), (rho_a.dim, rho_b.dim)
        )


def joint_probability(state: CompositeState, n: int, alpha: int) -> float:
    """Probability of the elementary composite event ``A_n (x) B_alpha``."""
    da, db = state.dims
    if not (0 <= n < da and 0 <= alpha < db):
        raise ValidationError(
            f"event indices ({n}, {alpha}) out of range for dims {state.dims}"
        )
    raw = state.element(n, alpha, n, alpha)
    return qcore.real_probability(raw, f"p(A_{n} x B_{alpha})")


def joint_table(state: CompositeState) -> np.ndarray:
    """All elementary joint probabilities as a ``dim_a x dim_b`` table."""
    da, db = state.dims
    diag = state.matrix.diagonal()
    if np.abs(diag.imag).max() > policy.PROBABILITY_TOL:
        raise NumericContractError(
            f"joint table has imaginary residue {np.abs(diag.imag).max():.3e}"
        )
    table = diag.real.reshape(da, db)
    if table.min() < -policy.PROBABILITY_TOL or table.max() > 1 + policy.PROBABILITY_TOL:
        raise NumericContractError("joint probability outside the unit window")
    return np.clip(table, 0.0, 1.0)


def marginals(state: CompositeState) -> tuple[np.ndarray, np.ndarray]:
    """Marginal distributions of both factors.

    Computed by summing the joint table, then verified against the
    diagonals of the two partial traces; the routes must agree to 1e-12.
    """
    table = joint_table(state)
    pa, pb = table.sum(axis=1), table.sum(axis=0)
    ra = qcore.partial_trace(state.matrix, state.dims, 0).diagonal().real
    rb = qcore.partial_trace(state.matrix, state.dims, 1).diagonal().real
    mismatch = max(np.abs(pa - ra).max(), np.abs(pb - rb).max())
    if mismatch > 1e-12:
        raise NumericContractError(
            f"marginal routes disagree: table sums vs partial traces by {mismatch:.3e}"
        )
    return pa, pb


def bayes_conditional(state: CompositeState, n: int, alpha: int) -> float:
    """Conditional probability of ``A_n`` given the sharp event ``B_alpha``."""
    joint = joint_probability(state, n, alpha)
    pb = marginals(state)[1][alpha]
    if pb <= policy.ZERO_EVENT_TOL:
        raise ZeroProbabilityError(
            f"cannot condition on B_{alpha}: probability {pb!r} is numerically zero"
        )
    return qcore.real_probability(joint / pb, "conditional probability")


@dataclass(frozen=True, eq=False)
class Prospect:
    """A sharp event in the first factor under an uncertain second factor."""

    n: int
    b: MultimodeState

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError(f"prospect index must be nonnegative, got {self.n}")


@dataclass(frozen=True, eq=False)
class ProspectOperator:
    """The rank-one positive operator ``P_n (x) |B><B|`` testing a prospect."""

    operator: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        m = np.array(qcore.require_hermitian(self.operator, "prospect operator"))
        da, db = self.dims
        if m.shape[0] != da * db:
            raise DimensionMismatchError(
                f"operator dimension {m.shape[0]} does not match dims {da} x {db}"
            )
        tol = policy.tolerance()
        w = np.linalg.eigvalsh(m)
        if w.min() < -tol:
            raise ValidationError(
                f"prospect operator not positive: lowest eigenvalue {w.min():.3e}"
            )
        if w.size > 1 and w[-2] > tol * max(1.0, w[-1]):
            raise ValidationError(
                f"prospect operator has rank > 1: second eigenvalue {w[-2]:.3e}"
            )
        object.__setattr__(self, "operator", _freeze(m))
        object.__setattr__(self, "dims", (int(da), int(db)))


def prospect_operator(prospect: Prospect, dims: tuple[int, int]) -> ProspectOperator:
    """Build the testing operator of a prospect on a space of given dims."""
    da, db = int(dims[0]), int(dims[1])
    if prospect.n >= da:
        raise ValidationError(f"prospect index {prospect.n} out of range for dim {da}")
    if prospect.b.dim != db:
        raise DimensionMismatchError(
            f"multimode state dim {prospect.b.dim} vs second factor dim {db}"
        )
    pn = np.zeros((da, da), dtype=complex)
    pn[prospect.n, prospect.n] = 1.0
    v = prospect.b.vector()
    return ProspectOperator(qcore.tensor_product(pn, np.outer(v, v.conj())), (da, db))


class ResolutionResiduals(NamedTuple):
    """How far a prospect family is from resolving identities.

    ``block`` measures the family sum against ``1_A (x) P_B`` (zero up to
    rounding by construction); ``identity`` measures it against the full
    identity and is genuinely large unless the multimode operator is
    itself the identity.  Reported for inspection, never asserted.
    """

    block: float
    identity: float


def resolution_residuals(b: MultimodeState, dim_a: int) -> ResolutionResiduals:
    total = sum(
        prospect_operator(Prospect(n, b), (dim_a, b.dim)).operator
        for n in range(dim_a)
    )
    v = b.vector()
    block = qcore.tensor_product(np.eye(dim_a, dtype=complex), np.outer(v, v.conj()))
    return ResolutionResiduals(
        float(np.abs(total - block).max()),
        float(np.abs(total - np.eye(dim_a * b.dim)).max()),
    )


@dataclass(frozen=True)
class ProspectProbability:
    """Prospect probability with its classical/interference split.

    ``p = f + q`` holds by construction.  For raw (unnormalized) values the
    scale is set by the squared norm of the multimode state; normalized
    values make the lattice a proper distribution.
    """

    p: float
    f: float
    q: float
    normalized: bool = False

    def __post_init__(self):
        for name, value in (("p", self.p), ("f", self.f), ("q", self.q)):
            if not np.isfinite(value):
                raise ValidationError(f"prospect probability field {name} is not finite")
        scale = max(1.0, abs(self.p), abs(self.f), abs(self.q))
        if abs(self.p - (self.f + self.q)) > 1e-12 * scale:
            raise NumericContractError(
                f"prospect split broken: p - (f + q) = {self.p - (self.f + self.q):.3e}"
            )
        if self.f < -1e-12:
            raise NumericContractError(f"classical part is negative: f = {self.f!r}")
        if self.normalized:
            w = policy.PROBABILITY_TOL
            if not -w <= self.p <= 1.0 + w:
                raise NumericContractError(
                    f"normalized prospect probability {self.p!r} outside [0, 1]"
                )
            if not -1.0 - w <= self.q <= 1.0 + w:
                raise NumericContractError(
                    f"normalized interference {self.q!r} outside [-1, 1]"
                )


def _mode_matrix(block: np.ndarray, b: MultimodeState) -> np.ndarray:
    """A second-factor block rewritten in the multimode state's mode basis."""
    e = b.basis.eigenbasis
    return e.conj().T @ block @ e


def _raw_components(state: CompositeState, n: int, b: MultimodeState) -> tuple[float, float, float]:
    m = _mode_matrix(state.block(n, n), b)
    coeff = b.coefficients
    raw = complex(np.vdot(coeff, m @ coeff))
    window = policy.PROBABILITY_TOL * max(1.0, b.gram())
    if abs(raw.imag) > window:
        raise NumericContractError(
            f"prospect probability has imaginary residue {raw.imag:.3e}"
        )
    f = float(np.sum(np.abs(coeff) ** 2 * m.diagonal().real))
    upper = np.triu_indices(b.dim, k=1)
    q = float(2.0 * np.sum((coeff.conj()[upper[0]] * coeff[upper[1]] * m[upper]).real))
    return raw.real, f, q


def _lattice_components(state: CompositeState, b: MultimodeState):
    da, db = state.dims
    if b.dim != db:
        raise DimensionMismatchError(
            f"multimode state dim {b.dim} vs second factor dim {db}"
        )
    triples = [_raw_components(state, n, b) for n in range(da)]
    p = np.array([t[0] for t in triples])
    f = np.array([t[1] for t in triples])
    q = np.array([t[2] for t in triples])
    return p, f, q


def prospect_lattice(
    state: CompositeState, b: MultimodeState, normalize: bool = True
) -> list[ProspectProbability]:
    """Prospect probabilities for every event index of the first factor.

    With ``normalize`` set (the default for lattice-level queries) the
    probabilities are conditioned on the multimode event: ``p`` is rescaled
    by the lattice total, ``f`` by the total classical weight, and ``q`` is
    their exact difference.  A lattice whose total weight is numerically
    zero cannot be normalized and raises a degenerate-lattice error.
    """
    p, f, q = _lattice_components(state, b)
    if not normalize:
        return [
            ProspectProbability(float(pn), float(fn), float(qn), normalized=False)
            for pn, fn, qn in zip(p, f, q)
        ]
    total_p, total_f = float(p.sum()), float(f.sum())
    if total_p <= policy.ZERO_EVENT_TOL or total_f <= policy.ZERO_EVENT_TOL:
        raise ZeroProbabilityError(
            f"degenerate lattice: total prospect weight {total_p!r} "
            f"(classical {total_f!r}) is numerically zero"
        )
    pn = p / total_p
    fn = f / total_f
    return [
        ProspectProbability(float(pv), float(fv), float(pv - fv), normalized=True)
        for pv, fv in zip(pn, fn)
    ]


def prospect_probability(
    state: CompositeState, prospect: Prospect, normalize: bool = True
) -> ProspectProbability:
    """Probability of one prospect, split into classical and interference parts.

    See :func:`prospect_lattice` for the meaning of ``normalize``; the
    normalization constants are always lattice-wide, so a normalized single
    prospect equals the corresponding entry of the normalized lattice.
    """
    da, _ = state.dims
    if prospect.n >= da:
        raise ValidationError(
            f"prospect index {prospect.n} out of range for dim {da}"
        )
    if normalize:
        return prospect_lattice(state, prospect.b, normalize=True)[prospect.n]
    p, f, q = _raw_components(state, prospect.n, prospect.b)
    return ProspectProbability(p, f, q, normalized=False)


def conditional_under_uncertainty(state: CompositeState, prospect: Prospect) -> float:
    """Probability of ``A_n`` conditioned on an uncertain multimode event.

    The numerator is the raw prospect probability; the denominator is the
    multimode event probability evaluated on the reduced second factor,
    interference included.  For a single-mode ``b`` this reduces to the
    sharp conditional, and for product states it returns the unconditional
    probability of ``A_n`` independently of ``b``.
    """
    da, _ = state.dims
    if prospect.n >= da:
        raise ValidationError(
            f"prospect index {prospect.n} out of range for dim {da}"
        )
    numerator, _, _ = _raw_components(state, prospect.n, prospect.b)
    denominator = multimode_probability(state.reduced(1), prospect.b).p
    if denominator <= policy.ZERO_EVENT_TOL:
        raise ZeroProbabilityError(
            f"cannot condition on multimode event of probability {denominator!r}"
        )
    return qcore.real_probability(numerator / denominator, "conditional probability")


@dataclass(frozen=True)
class ClassicalLimitReport:
    """Numbers behind the classical-limit property of a normalized lattice."""

    sum_f: float
    sum_q: float
    q_min: float
    q_max: float
    values: tuple[ProspectProbability, ...]
    passed: bool


def classical_limit_check(
    lattice: Sequence[Prospect], state: CompositeState
) -> ClassicalLimitReport:
    """Check that a complete prospect lattice behaves classically in the mean.

    The lattice must cover every event index of the first factor exactly
    once and share a single multimode state.  After normalization the
    classical parts must form a distribution and the interference terms
    must cancel: ``|sum q| <= 1e-10``, each ``q`` in [-1, 1], each ``f``
    in [0, 1].
    """
    prospects = list(lattice)
    da, _ = state.dims
    if sorted(p.n for p in prospects) != list(range(da)):
        raise ValidationError(
            f"incomplete lattice: indices {sorted(p.n for p in prospects)} "
            f"must cover 0..{da - 1} exactly once"
        )
    first = prospects[0].b
    for p in prospects[1:]:
        if p.b.dim != first.dim or not np.array_equal(
            p.b.coefficients, first.coefficients
        ) or not np.array_equal(p.b.basis.eigenbasis, first.basis.eigenbasis):
            raise ValidationError("lattice prospects must share one multimode state")

    by_index = {p.n: p for p in prospects}
    values = prospect_lattice(state, first, normalize=True)
    ordered = tuple(values[by_index[n].n] for n in range(da))
    sum_f = float(sum(v.f for v in ordered))
    sum_q = float(sum(v.q for v in ordered))
    q_min = min(v.q for v in ordered)
    q_max = max(v.q for v in ordered)
    w = policy.PROBABILITY_TOL
    passed = (
        abs(sum_q) <= 1e-10
        and all(-1.0 - w <= v.q <= 1.0 + w for v in ordered)
        and all(-w <= v.f <= 1.0 + w for v in ordered)
    )
    return ClassicalLimitReport(sum_f, sum_q, q_min, q_max, ordered, passed)
