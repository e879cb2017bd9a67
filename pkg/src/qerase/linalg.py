"""Dense complex Hermitian linear algebra for small dimensions.

All routines work on plain numpy arrays and use exact dense algebra.  The
core quantum toolkit targets dimensions up to 64 (a few qubits per
subsystem); the hard cap sits at 1024 only so that recovery blocks of up
to 10 qubits can reuse the same validated carriers.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
MAX_DIM = 1024

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class ValidationError(ValueError):
    """An object violates one of its declared invariants."""


def as_matrix(obj) -> np.ndarray:
    """Coerce to a square complex matrix (accepts anything with a .matrix)."""
    m = getattr(obj, "matrix", obj)
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise ValidationError(
            f"dimension {m.shape[0]} exceeds the supported maximum {MAX_DIM}"
        )
    return m


def require_hermitian(obj, tol: float = HERMITICITY_TOL, name: str = "operator") -> np.ndarray:
    """Validate Hermiticity (max elementwise deviation from the adjoint)."""
    m = as_matrix(obj)
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise ValidationError(
            f"{name} is not Hermitian: max |M - M^dag| = {dev:.3e} > {tol:.0e}"
        )
    return m


def eig_hermitian(obj, tol: float = HERMITICITY_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix.

    The input is validated; non-Hermitian matrices are rejected rather than
    silently symmetrized.
    """
    m = require_hermitian(obj, tol=tol)
    vals, vecs = np.linalg.eigh(m)
    return vals, vecs


def trace_distance(rho, sigma) -> float:
    """Trace distance (1/2)||rho - sigma||_1 via the eigenvalues of the difference."""
    a = as_matrix(rho)
    b = as_matrix(sigma)
    if a.shape != b.shape:
        raise ValidationError(
            f"trace_distance: dimension mismatch {a.shape[0]} vs {b.shape[0]}"
        )
    diff = require_hermitian(a - b, tol=10 * HERMITICITY_TOL, name="difference")
    vals = np.linalg.eigvalsh(diff)
    return 0.5 * float(np.sum(np.abs(vals)))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m.T)
