"""Numeric policy shared across the package.

All operator-level validation (hermiticity, unitarity, positivity, unit
trace) uses a single absolute tolerance.  It defaults to 1e-10 and can be
overridden either programmatically with :func:`set_tolerance` or through
the ``QPROSPECT_TOL`` environment variable, read once at import time.

The remaining constants are fixed contracts, not tunables: probability
window checks, POVM resolution residuals, and wave-function norm drift
each have their own scale and are pinned here by name.
"""

import os

DEFAULT_TOLERANCE = 1e-10

# Window for raw probability-like values before clamping to [0, 1].
# Values outside [-PROBABILITY_TOL, 1 + PROBABILITY_TOL] are an error.
PROBABILITY_TOL = 1e-12

# Residual allowed on a resolution of unity built from generalized
# propositions (sum of the family vs the identity, max-abs entrywise).
POVM_TOL = 1e-8

# Norm drift allowed on wave-function coefficient vectors and on
# two-time amplitude matrices.
NORM_TOL = 1e-8

# Minimal spacing between outcome values of a nondegenerate observable.
EIGENVALUE_GAP = 1e-12

# Division guard: events with probability at or below this cannot be
# conditioned on or reduced to.
ZERO_EVENT_TOL = 1e-12

# Hard cap on the dimension of any operator this package will build.
MAX_DIM = 4096

_tolerance = float(os.environ.get("QPROSPECT_TOL", DEFAULT_TOLERANCE))


def tolerance() -> float:
    """Current operator-validation tolerance (absolute)."""
    return _tolerance


def set_tolerance(value: float) -> float:
    """Set the operator-validation tolerance; returns the previous value."""
    global _tolerance
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ValueError(f"tolerance must be in (0, 1), got {value}")
    previous = _tolerance
    _tolerance = value
    return previous
