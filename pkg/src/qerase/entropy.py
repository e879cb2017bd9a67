"""Entropy primitives.  All quantities are in bits (base-2 logarithms).

Work values throughout the package are measured in units of kT*ln2, so one
bit of entropy corresponds to one unit of erasure work.
"""

from __future__ import annotations

import numpy as np

from .linalg import ValidationError, as_matrix

WEIGHT_TOL = 1e-12
NORMALIZATION_TOL = 1e-10
EIGENVALUE_CLAMP = 1e-10


def require_distribution(weights, name: str = "distribution") -> np.ndarray:
    """Validate a probability vector and return it with tiny negatives clamped to 0.

    Weights below -1e-12 are treated as genuinely invalid rather than noise.
    """
    w = np.asarray(weights, dtype=float).ravel()
    if w.size == 0:
        raise ValidationError(f"{name} is empty")
    low = float(w.min())
    if low < -WEIGHT_TOL:
        raise ValidationError(f"{name} has negative weight {low:.3e} < -{WEIGHT_TOL:.0e}")
    total = float(w.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"{name} sums to {total!r}, not 1 within {NORMALIZATION_TOL:.0e}")
    return np.clip(w, 0.0, None)


def _neg_xlog2x(p: np.ndarray) -> float:
    """Sum of -p*log2(p) with the 0*log0 := 0 convention."""
    nz = p[p > 0.0]
    if nz.size == 0:
        return 0.0
    return float(-np.sum(nz * np.log2(nz))) + 0.0  # +0.0 normalizes -0.0


def shannon_entropy(weights) -> float:
    """Shannon entropy H(p) in bits of a probability vector."""
    return _neg_xlog2x(require_distribution(weights))


def binary_entropy(x: float) -> float:
    """h2(x) = -x log2 x - (1-x) log2(1-x), the two-outcome Shannon entropy."""
    if x < -WEIGHT_TOL or x > 1.0 + WEIGHT_TOL:
        raise ValidationError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return _neg_xlog2x(np.array([x, 1.0 - x]))


def clamp_eigenvalues(vals: np.ndarray, name: str = "spectrum") -> np.ndarray:
    """Clamp eigenvalues in [-1e-10, 0) to 0; reject anything more negative."""
    vals = np.asarray(vals, dtype=float)
    low = float(vals.min()) if vals.size else 0.0
    if low < -EIGENVALUE_CLAMP:
        raise ValidationError(
            f"{name} has eigenvalue {low:.3e} < -{EIGENVALUE_CLAMP:.0e}; not PSD"
        )
    return np.clip(vals, 0.0, None)


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy S(rho) in bits, from the eigenvalue spectrum.

    Accepts a DensityMatrix or a raw PSD unit-trace matrix; the spectrum is
    clamped per `clamp_eigenvalues` and the result lies in [0, log2 dim].
    """
    m = as_matrix(rho)
    vals = clamp_eigenvalues(np.linalg.eigvalsh(m), name="state spectrum")
    total = float(vals.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"state trace is {total!r}, not 1 within {NORMALIZATION_TOL:.0e}")
    return max(_neg_xlog2x(vals), 0.0)
