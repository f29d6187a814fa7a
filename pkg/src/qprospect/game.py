"""Two-player prisoner-dilemma game with quantum interference.

The classical prospect weights come from a declared joint-action table:
``f(pi_1)`` aggregates the first player's cooperation row, ``f(pi_2)``
the defection row.  Deciding under uncertainty about the partner adds an
interference term ``q`` to each prospect.  Without further information
``q`` is treated as a random variable on ``[-1, 1]`` with a normalized
zero-mean density; the *quarter law* evaluates the typical positive and
negative contributions as the half-line first moments, which for the
uniform non-informative density are exactly +1/4 and -1/4.

Broken symmetry (the empirically observed case) assigns the positive
interference to one favored prospect and its negative to the other.
Cohort simulations draw a per-participant interference whose population
mean reproduces the quarter-law value, so the sampled cooperation
fraction converges on the closed-form one.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import policy
from .errors import NumericContractError, ValidationError, ZeroProbabilityError


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Joint-action probability table, optionally with dilemma payoffs.

    ``joint[i, j]`` is the probability that player one takes action ``i``
    (0 = cooperate, 1 = defect) while player two takes action ``j``.
    Payoffs, when declared, are ``(reward, sucker, temptation, punishment)``
    and must obey the dilemma ordering temptation > reward > punishment >
    sucker; they are carried for validation and reporting only.
    """

    joint: np.ndarray
    payoffs: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        table = np.array(self.joint, dtype=float)
        if table.shape != (2, 2):
            raise ValidationError(f"joint table must be 2x2, got shape {table.shape}")
        if not np.all(np.isfinite(table)):
            raise ValidationError("joint table has non-finite entries")
        if table.min() < -policy.PROBABILITY_TOL:
            raise ValidationError(f"joint table has negative entry {float(table.min())!r}")
        if abs(table.sum() - 1.0) > 1e-12:
            raise ValidationError(
                f"joint table must sum to 1, got {float(table.sum())!r}"
            )
        object.__setattr__(self, "joint", _freeze(np.clip(table, 0.0, 1.0)))
        if self.payoffs is not None:
            x1, x2, x3, x4 = (float(x) for x in self.payoffs)
            if not all(np.isfinite(x) for x in (x1, x2, x3, x4)):
                raise ValidationError("payoffs must be finite")
            if not (x3 > x1 > x4 > x2):
                raise ValidationError(
                    "payoffs break the dilemma ordering "
                    "temptation > reward > punishment > sucker: "
                    f"{(x1, x2, x3, x4)}"
                )
            object.__setattr__(self, "payoffs", (x1, x2, x3, x4))


def classical_prospects(spec: GameSpec) -> tuple[float, float]:
    """Classical weights of the two prospects: row sums of the joint table."""
    f1 = float(spec.joint[0].sum())
    f2 = float(spec.joint[1].sum())
    return f1, f2


def _piecewise_linear_moments(grid: np.ndarray, density: np.ndarray) -> tuple[float, float]:
    """Exact zeroth and first moments of a piecewise-linear density."""
    a, b = grid[:-1], grid[1:]
    ya, yb = density[:-1], density[1:]
    slope = (yb - ya) / (b - a)
    intercept = ya - slope * a
    mass = float(np.sum((ya + yb) * (b - a) / 2.0))
    first = float(np.sum(slope * (b**3 - a**3) / 3.0 + intercept * (b**2 - a**2) / 2.0))
    return mass, first


@dataclass(frozen=True, eq=False)
class InterferenceDistribution:
    """Density of the interference term on ``[-1, 1]``.

    Either the uniform non-informative density (1/2 everywhere) or a
    user-tabulated piecewise-linear density given by a strictly increasing
    grid and nonnegative values, zero outside the tabulated range.  Both
    must integrate to one with zero mean, checked exactly for the
    piecewise-linear case.
    """

    kind: str
    grid: np.ndarray | None = None
    density: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "uniform":
            if self.grid is not None or self.density is not None:
                raise ValidationError("uniform density takes no tabulation")
            return
        if self.kind != "tabulated":
            raise ValidationError(f"unknown interference density kind {self.kind!r}")
        grid = np.array(self.grid, dtype=float).reshape(-1)
        density = np.array(self.density, dtype=float).reshape(-1)
        if grid.size < 2 or grid.size != density.size:
            raise ValidationError("tabulated density needs matching grid and values")
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(density))):
            raise ValidationError("tabulated density has non-finite entries")
        if np.any(np.diff(grid) <= 0):
            raise ValidationError("tabulated grid must be strictly increasing")
        if grid[0] < -1.0 or grid[-1] > 1.0:
            raise ValidationError("tabulated grid must stay within [-1, 1]")
        if density.min() < 0:
            raise ValidationError(f"density has negative value {float(density.min())!r}")
        mass, mean = _piecewise_linear_moments(grid, density)
        if abs(mass - 1.0) > 1e-10:
            raise ValidationError(f"density is not normalized: integral = {mass!r}")
        if abs(mean) > 1e-10:
            raise ValidationError(f"density has nonzero mean: {mean!r}")
        object.__setattr__(self, "grid", _freeze(grid))
        object.__setattr__(self, "density", _freeze(density))

    def pdf(self, q):
        """Density value(s) at ``q``; zero outside the support."""
        q = np.asarray(q, dtype=float)
        if self.kind == "uniform":
            out = np.where((q >= -1.0) & (q <= 1.0), 0.5, 0.0)
        else:
            out = np.interp(q, self.grid, self.density, left=0.0, right=0.0)
        return out if out.ndim else float(out)

    @classmethod
    def uniform(cls) -> "InterferenceDistribution":
        return cls("uniform")

    @classmethod
    def tabulated(cls, grid, density) -> "InterferenceDistribution":
        return cls("tabulated", np.asarray(grid, dtype=float), np.asarray(density, dtype=float))


def _half_line_moment(dist: InterferenceDistribution, lo: float, hi: float) -> float:
    interior = ()
    if dist.kind == "tabulated":
        interior = tuple(x for x in dist.grid if lo < x < hi)
    value, estimate = quad(
        lambda q: q * dist.pdf(q), lo, hi,
        points=interior or None, epsabs=1e-12,
        limit=max(200, len(interior) + 10),
    )
    if estimate > 1e-10:
        raise NumericContractError(
            f"quadrature error estimate {estimate:.3e} exceeds 1e-10"
        )
    return value


def quarter_law(dist: InterferenceDistribution) -> tuple[float, float]:
    """Typical positive and negative interference: half-line first moments.

    Returns ``(q_plus, q_minus)`` with ``q_plus`` the integral of
    ``q mu(q)`` over [0, 1] and ``q_minus`` over [-1, 0]; for the uniform
    density these are exactly (+1/4, -1/4).  Adaptive quadrature with
    absolute error below 1e-10.
    """
    return (
        _half_line_moment(dist, 0.0, 1.0),
        _half_line_moment(dist, -1.0, 0.0),
    )


def _positive_mass(dist: InterferenceDistribution) -> float:
    if dist.kind == "uniform":
        return 0.5
    grid, density = dist.grid, dist.density
    if grid[0] < 0.0 < grid[-1] and 0.0 not in grid:
        cut = np.searchsorted(grid, 0.0)
        g0 = np.concatenate([[0.0], grid[cut:]])
        d0 = np.concatenate([[float(dist.pdf(0.0))], density[cut:]])
    else:
        keep = grid >= 0.0
        g0, d0 = grid[keep], density[keep]
    if g0.size < 2:
        return 0.0
    return _piecewise_linear_moments(g0, d0)[0]


@dataclass(frozen=True)
class GameResult:
    """Closed-form prospect probabilities of one participant."""

    f: tuple[float, float]
    q_applied: tuple[float, float]
    p: tuple[float, float]
    clamped: bool = False
    empirical_reference: tuple[float, float] | None = None

    def deviations(self) -> tuple[float, float] | None:
        if self.empirical_reference is None:
            return None
        return (
            abs(self.p[0] - self.empirical_reference[0]),
            abs(self.p[1] - self.empirical_reference[1]),
        )


def _clamp_and_renormalize(p1, p2) -> tuple[np.ndarray, np.ndarray, bool]:
    clamped = bool(np.any(p1 < 0) or np.any(p1 > 1) or np.any(p2 < 0) or np.any(p2 > 1))
    c1 = np.clip(p1, 0.0, 1.0)
    c2 = np.clip(p2, 0.0, 1.0)
    total = c1 + c2
    if np.any(total <= policy.ZERO_EVENT_TOL):
        raise ZeroProbabilityError("both prospect probabilities clamp to zero")
    return c1 / total, c2 / total, clamped


def broken_symmetry_probabilities(
    f: tuple[float, float],
    q_magnitude: float,
    favored: str = "cooperate",
    empirical_reference: tuple[float, float] | None = None,
) -> GameResult:
    """Prospect probabilities when the interference symmetry is broken.

    The favored prospect receives ``+q_magnitude`` and the other prospect
    its negative; each sum is clamped to [0, 1] and the pair renormalized,
    keeping the decomposition ``p = f + q`` meaningful for interior values.
    """
    f1, f2 = float(f[0]), float(f[1])
    if f1 < -policy.PROBABILITY_TOL or f2 < -policy.PROBABILITY_TOL:
        raise ValidationError(f"classical weights must be nonnegative, got {f}")
    if abs(f1 + f2 - 1.0) > 1e-10:
        raise ValidationError(f"classical weights must sum to 1, got {f1 + f2!r}")
    if not 0.0 <= q_magnitude <= 1.0:
        raise ValidationError(f"interference magnitude must lie in [0, 1], got {q_magnitude}")
    if favored == "cooperate":
        q1, q2 = q_magnitude, -q_magnitude
    elif favored == "defect":
        q1, q2 = -q_magnitude, q_magnitude
    else:
        raise ValidationError(f"favored must be 'cooperate' or 'defect', got {favored!r}")
    p1, p2, clamped = _clamp_and_renormalize(
        np.asarray(f1 + q1), np.asarray(f2 + q2)
    )
    return GameResult(
        (f1, f2), (q1, q2), (float(p1), float(p2)), clamped, empirical_reference
    )


@dataclass(frozen=True)
class CohortReport:
    """Aggregate statistics of a simulated participant cohort."""

    n_pairs: int
    symmetry: str
    favored: str | None
    mean_q: float
    q_stderr: float
    cooperation_fraction: float
    defection_fraction: float
    seed: int
    fixed_q: bool


def _sample_magnitudes(dist: InterferenceDistribution, n: int, rng) -> np.ndarray:
    """Positive interference magnitudes whose population mean is ``q_plus``.

    Magnitudes are drawn from the positive-side conditional of the density
    and scaled by the positive-side mass, so the cohort mean matches the
    quarter-law value rather than the (larger) conditional mean.
    """
    mass = _positive_mass(dist)
    if mass <= policy.ZERO_EVENT_TOL:
        raise ValidationError("density has no mass on the positive half-line")
    if dist.kind == "uniform":
        return mass * rng.random(n)
    kinks = np.concatenate([[0.0], dist.grid[(dist.grid > 0) & (dist.grid < 1)], [1.0]])
    fine = np.unique(np.concatenate([np.linspace(0.0, 1.0, 16385), kinks]))
    values = np.asarray(dist.pdf(fine), dtype=float)
    widths = np.diff(fine)
    cum = np.concatenate([[0.0], np.cumsum((values[:-1] + values[1:]) * widths / 2.0)])
    cdf = cum / cum[-1]
    draws = np.interp(rng.random(n), cdf, fine)
    return mass * draws


def _sample_signed(dist: InterferenceDistribution, n: int, rng) -> np.ndarray:
    """Signed draws from the full density with equiprobable sign assignment."""
    if dist.kind == "uniform":
        body = 2.0 * rng.random(n) - 1.0
    else:
        fine = np.unique(np.concatenate([np.linspace(-1.0, 1.0, 32769), dist.grid]))
        values = np.asarray(dist.pdf(fine), dtype=float)
        widths = np.diff(fine)
        cum = np.concatenate([[0.0], np.cumsum((values[:-1] + values[1:]) * widths / 2.0)])
        cdf = cum / cum[-1]
        body = np.interp(rng.random(n), cdf, fine)
    signs = rng.integers(0, 2, size=n) * 2.0 - 1.0
    return signs * np.abs(body)


def monte_carlo_cohort(
    spec: GameSpec,
    dist: InterferenceDistribution,
    n_pairs: int,
    symmetry: str = "broken",
    favored: str = "cooperate",
    seed: int = 0,
    fixed_q: bool = False,
) -> CohortReport:
    """Simulate a cohort of participant pairs deciding under uncertainty.

    With broken symmetry every participant attaches a positive
    interference magnitude to the favored prospect (drawn as described in
    the module docstring, or pinned exactly to the quarter-law value with
    ``fixed_q``); with intact symmetry the signed interference is drawn
    from the full density with an equiprobable sign, so its mean vanishes.
    The report aggregates the sampled interference and the cohort-mean
    prospect probabilities.  Fixed seed means reproducible output.
    """
    if n_pairs < 1:
        raise ValidationError(f"need at least one pair, got {n_pairs}")
    if symmetry not in ("broken", "intact"):
        raise ValidationError(f"symmetry must be 'broken' or 'intact', got {symmetry!r}")
    if symmetry == "intact" and fixed_q:
        raise ValidationError("fixed_q only makes sense with broken symmetry")
    f1, f2 = classical_prospects(spec)
    rng = np.random.default_rng(seed)

    if symmetry == "broken":
        if favored not in ("cooperate", "defect"):
            raise ValidationError(
                f"favored must be 'cooperate' or 'defect', got {favored!r}"
            )
        if fixed_q:
            q_plus, _ = quarter_law(dist)
            magnitudes = np.full(n_pairs, q_plus)
        else:
            magnitudes = _sample_magnitudes(dist, n_pairs, rng)
        q1 = magnitudes if favored == "cooperate" else -magnitudes
        reported = magnitudes
    else:
        favored = None
        q1 = _sample_signed(dist, n_pairs, rng)
        reported = q1

    p1, p2, _ = _clamp_and_renormalize(f1 + q1, f2 - q1)
    stderr = float(reported.std(ddof=1) / np.sqrt(n_pairs)) if n_pairs > 1 else 0.0
    return CohortReport(
        n_pairs=n_pairs,
        symmetry=symmetry,
        favored=favored,
        mean_q=float(reported.mean()),
        q_stderr=stderr,
        cooperation_fraction=float(p1.mean()),
        defection_fraction=float(p2.mean()),
        seed=seed,
        fixed_q=fixed_q,
    )
