"""Dense linear-algebra kernel.

Everything here works on plain complex ``numpy`` arrays.  Composite
spaces use the row-major convention throughout the package: in
``tensor_product(a, b)`` the first factor owns the slow index, so the
product basis vector ``|n alpha>`` sits at flat position
``n * dim_b + alpha``.
"""

import numpy as np

from . import policy
from .errors import (
    DimensionMismatchError,
    NumericContractError,
    SizeLimitError,
    ValidationError,
)


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite square complex ndarray; raise on anything else."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValidationError(f"{name} is empty")
    if a.shape[0] > policy.MAX_DIM:
        raise SizeLimitError(
            f"{name} has dimension {a.shape[0]}, above the cap {policy.MAX_DIM}"
        )
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def as_complex_vector(v, name: str = "vector") -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1 or a.size == 0:
        raise DimensionMismatchError(f"{name} must be a nonempty 1-d array")
    if a.size > policy.MAX_DIM:
        raise SizeLimitError(f"{name} has size {a.size}, above the cap {policy.MAX_DIM}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-abs deviation of ``m`` from its own adjoint."""
    return float(np.abs(m - m.conj().T).max())


def require_hermitian(m, name: str = "matrix", tol: float | None = None) -> np.ndarray:
    a = as_complex_matrix(m, name)
    bound = policy.tolerance() if tol is None else tol
    defect = hermiticity_defect(a)
    if defect > bound:
        raise ValidationError(
            f"{name} is not Hermitian: max deviation {defect:.3e} exceeds {bound:.1e}"
        )
    return a


def require_unitary(m, name: str = "matrix", tol: float | None = None) -> np.ndarray:
    a = as_complex_matrix(m, name)
    bound = policy.tolerance() if tol is None else tol
    defect = float(np.abs(a.conj().T @ a - np.eye(a.shape[0])).max())
    if defect > bound:
        raise ValidationError(
            f"{name} is not unitary: max deviation {defect:.3e} exceeds {bound:.1e}"
        )
    return a


def real_probability(value: complex, name: str = "probability") -> float:
    """Check a raw probability-like value and clamp it to [0, 1].

    The imaginary part must vanish within the probability window and the
    real part must lie in ``[-w, 1 + w]`` with ``w = policy.PROBABILITY_TOL``.
    Larger violations raise :class:`NumericContractError`; clamping is only
    allowed after the window check passes.
    """
    w = policy.PROBABILITY_TOL
    value = complex(value)
    if abs(value.imag) > w:
        raise NumericContractError(
            f"{name} has imaginary residue {value.imag:.3e} beyond {w:.1e}"
        )
    x = value.real
    if x < -w or x > 1.0 + w:
        raise NumericContractError(
            f"{name} = {x!r} lies outside [-{w:.0e}, 1 + {w:.0e}]"
        )
    return min(max(x, 0.0), 1.0)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the slow index."""
    a = as_complex_matrix(a, "first factor")
    b = as_complex_matrix(b, "second factor")
    if a.shape[0] * b.shape[0] > policy.MAX_DIM:
        raise SizeLimitError(
            f"product dimension {a.shape[0] * b.shape[0]} exceeds the cap {policy.MAX_DIM}"
        )
    return np.kron(a, b)


def partial_trace(m, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    Parameters
    ----------
    m : array_like
        Operator on the product space, shape ``(d0*d1, d0*d1)``.
    dims : (int, int)
        Dimensions ``(d0, d1)`` of the two factors, first factor slow.
    keep : int
        0 keeps the first factor (traces out the second), 1 keeps the
        second.
    """
    a = as_complex_matrix(m, "bipartite operator")
    d0, d1 = int(dims[0]), int(dims[1])
    if d0 < 1 or d1 < 1 or d0 * d1 != a.shape[0]:
        raise DimensionMismatchError(
            f"dims {dims} incompatible with operator of dimension {a.shape[0]}"
        )
    if keep not in (0, 1):
        raise ValidationError(f"keep must be 0 or 1, got {keep!r}")
    four = a.reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum("ijkj->ik", four)
    return np.einsum("ijil->jl", four)


def matrix_exponential(h, t: float) -> np.ndarray:
    """Unitary propagator ``exp(-i h t)`` of a Hermitian generator.

    Computed by eigendecomposition, which keeps the result unitary to
    machine precision for the dimensions this package supports.
    """
    a = require_hermitian(h, "generator")
    t = float(t)
    if not np.isfinite(t):
        raise ValidationError("time must be finite")
    w, v = np.linalg.eigh(a)
    phases = np.exp(-1j * w * t)
    return (v * phases) @ v.conj().T


def spectral_norm(m) -> float:
    """Largest eigenvalue of a Hermitian positive-semidefinite matrix."""
    a = require_hermitian(m, "operator")
    w = np.linalg.eigvalsh(a)
    if w.min() < -policy.tolerance():
        raise ValidationError(
            f"operator has negative eigenvalue {w.min():.3e}, not positive-semidefinite"
        )
    return float(w.max())
