"""Density matrices: construction, composition, validation, and (de)serialization.

Conventions, fixed package-wide:

* subsystem order is (helper A, memory B, environment E) = indices (0, 1, 2);
* composite indices follow the row-major Kronecker rule, i.e. ``np.kron(a, b)``
  places subsystem 0 on the slow index, so |i>_A |j>_B sits at row i*d_B + j.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .entropy import clamp_eigenvalues
from .linalg import (
    MAX_DIM,
    TRACE_TOL,
    ValidationError,
    require_hermitian,
    trace_distance,
)

PURITY_TOL = 1e-9
PURIFICATION_TOL = 1e-9
RANK_CUTOFF = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace operator together with its subsystem split."""

    matrix: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        m = require_hermitian(self.matrix, name="density matrix")
        dims = tuple(int(d) for d in self.dims) or (m.shape[0],)
        if any(d < 1 for d in dims):
            raise ValidationError(f"subsystem dimensions must be positive, got {dims}")
        if int(np.prod(dims)) != m.shape[0]:
            raise ValidationError(
                f"subsystem dimensions {dims} do not multiply to {m.shape[0]}"
            )
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace is {tr!r}, not 1 within {TRACE_TOL:.0e}")
        clamp_eigenvalues(np.linalg.eigvalsh(m), name="density matrix spectrum")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return clamp_eigenvalues(np.linalg.eigvalsh(self.matrix))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return abs(self.purity() - 1.0) <= tol

    def rank(self, cutoff: float = RANK_CUTOFF) -> int:
        return int(np.sum(self.eigenvalues() > cutoff))

    def with_dims(self, dims) -> "DensityMatrix":
        return DensityMatrix(self.matrix, tuple(dims))

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "re": np.real(self.matrix).tolist(),
            "im": np.imag(self.matrix).tolist(),
        }

    @staticmethod
    def from_json_dict(data: dict) -> "DensityMatrix":
        for key in ("dims", "re", "im"):
            if key not in data:
                raise ValidationError(f"state JSON is missing required field '{key}'")
        m = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        return DensityMatrix(m, tuple(int(d) for d in data["dims"]))


def load_state(path) -> DensityMatrix:
    with open(path) as fh:
        return DensityMatrix.from_json_dict(json.load(fh))


def save_state(state: DensityMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(state.to_json_dict(), fh, sort_keys=True)


def basis_ket(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def pure_state(ket, dims=()) -> DensityMatrix:
    """Rank-1 density matrix |psi><psi| from a (normalized) state vector."""
    v = np.asarray(ket, dtype=complex).ravel()
    n = np.linalg.norm(v)
    if n == 0:
        raise ValidationError("cannot build a pure state from the zero vector")
    v = v / n
    return DensityMatrix(np.outer(v, v.conj()), tuple(dims) or (v.size,))


def maximally_mixed(dim: int, dims=()) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim, tuple(dims) or (dim,))


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker product; subsystem lists concatenate."""
    return DensityMatrix(np.kron(a.matrix, b.matrix), a.dims + b.dims)


def partial_trace(state: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the subsystems in `keep` (relative order preserved)."""
    keep = sorted(set(int(k) for k in keep))
    n = len(state.dims)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"invalid subsystem index set {keep} for {n} subsystems")
    dims = state.dims
    t = state.matrix.reshape(dims + dims)
    # contract each traced subsystem's row index with its column index
    traced = [k for k in range(n) if k not in keep]
    for k in sorted(traced, reverse=True):
        t = np.trace(t, axis1=k, axis2=k + (t.ndim // 2))
    d = int(np.prod([dims[k] for k in keep]))
    return DensityMatrix(t.reshape(d, d), tuple(dims[k] for k in keep))


def permute_subsystems(state: DensityMatrix, order) -> DensityMatrix:
    """Reorder subsystems; `order[i]` is the old index placed at new slot i."""
    order = [int(k) for k in order]
    n = len(state.dims)
    if sorted(order) != list(range(n)):
        raise ValidationError(f"{order} is not a permutation of {n} subsystems")
    dims = state.dims
    t = state.matrix.reshape(dims + dims)
    t = np.transpose(t, axes=order + [n + k for k in order])
    new_dims = tuple(dims[k] for k in order)
    d = state.dim
    return DensityMatrix(t.reshape(d, d), new_dims)


@dataclass(frozen=True)
class Purification:
    """Rank-1 extension |psi><psi| on (A, B, E) of a bipartite source state."""

    state: DensityMatrix
    source: DensityMatrix
    ket: np.ndarray = field(repr=False)

    def __post_init__(self):
        if abs(self.state.purity() - 1.0) > PURITY_TOL:
            raise ValidationError(
                f"purification is not pure: Tr(rho^2) = {self.state.purity()!r}"
            )
        reduced = partial_trace(self.state, range(len(self.source.dims)))
        dev = trace_distance(reduced, self.source)
        if dev > PURIFICATION_TOL:
            raise ValidationError(
                f"purification does not reduce to its source: trace distance {dev:.3e}"
            )
        k = np.asarray(self.ket, dtype=complex).copy()
        k.setflags(write=False)
        object.__setattr__(self, "ket", k)

    @property
    def environment_dim(self) -> int:
        return self.state.dims[-1]


def purify(state: DensityMatrix) -> Purification:
    """Spectral purification: |psi> = sum_i sqrt(l_i) |e_i> |i>_E with d_E = rank."""
    vals, vecs = np.linalg.eigh(state.matrix)
    vals = clamp_eigenvalues(vals)
    support = vals > RANK_CUTOFF
    vals, vecs = vals[support], vecs[:, support]
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    d_env = max(int(vals.size), 1)
    ket = np.zeros(state.dim * d_env, dtype=complex)
    for i in range(vals.size):
        ket += np.sqrt(vals[i]) * np.kron(vecs[:, i], basis_ket(d_env, i))
    big = pure_state(ket, state.dims + (d_env,))
    return Purification(state=big, source=state, ket=ket)


_BELL_KETS = {
    "phi_plus": np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    "phi_minus": np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2),
    "psi_plus": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    "psi_minus": np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
}


def bell_state(which: str = "phi_plus") -> DensityMatrix:
    """One of the four maximally entangled two-qubit states."""
    key = which.lower()
    if key not in _BELL_KETS:
        raise ValidationError(f"unknown Bell state {which!r}; use one of {sorted(_BELL_KETS)}")
    return pure_state(_BELL_KETS[key], (2, 2))


def werner_state(p: float) -> DensityMatrix:
    """Singlet fraction family p*|psi_minus><psi_minus| + (1-p)/4 * I."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"Werner parameter {p!r} outside [0, 1]")
    singlet = _BELL_KETS["psi_minus"]
    m = p * np.outer(singlet, singlet.conj()) + (1.0 - p) / 4.0 * np.eye(4)
    return DensityMatrix(m, (2, 2))


def classically_correlated(weights, basis_a, basis_b) -> DensityMatrix:
    """Zero-discord mixture sum_i p_i |a_i><a_i| (x) |b_i><b_i|."""
    from .entropy import require_distribution

    w = require_distribution(weights, name="mixing weights")
    cols_a = np.asarray(getattr(basis_a, "vectors", basis_a), dtype=complex)
    cols_b = np.asarray(getattr(basis_b, "vectors", basis_b), dtype=complex)
    if cols_a.shape[1] < w.size or cols_b.shape[1] < w.size:
        raise ValidationError(
            f"bases provide {cols_a.shape[1]}x{cols_b.shape[1]} vectors "
            f"for {w.size} mixture terms"
        )
    d = cols_a.shape[0] * cols_b.shape[0]
    m = np.zeros((d, d), dtype=complex)
    for i, p in enumerate(w):
        if p == 0.0:
            continue
        ket = np.kron(cols_a[:, i], cols_b[:, i])
        m += p * np.outer(ket, ket.conj())
    return DensityMatrix(m, (cols_a.shape[0], cols_b.shape[0]))


def random_density(dim: int, rank: int | None = None, seed: int = 0, dims=()) -> DensityMatrix:
    """Ginibre-induced random state of the given rank; deterministic in seed."""
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank {rank} outside [1, {dim}]")
    if dim > MAX_DIM:
        raise ValidationError(f"dimension {dim} exceeds the supported maximum {MAX_DIM}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.real(np.trace(m)), tuple(dims) or (dim,))


def werner_separable_parts(p: float):
    """Explicit product-state decomposition of the Werner family for p <= 1/3.

    Mixes the six antipodal Bloch-axis pairs |a>|-a> (which average to the
    p = 1/3 state) with the four computational product states making up the
    identity.  Weights: 3p/6 per axis pair and (1-3p)/4 per identity term.
    """
    if not 0.0 <= p <= 1.0 / 3.0 + 1e-15:
        raise ValidationError(f"no product decomposition for Werner p = {p!r} > 1/3")
    s = 1.0 / np.sqrt(2.0)
    axis_kets = [
        (np.array([s, s]), np.array([s, -s])),          # +x / -x
        (np.array([s, -s]), np.array([s, s])),
        (np.array([s, 1j * s]), np.array([s, -1j * s])),  # +y / -y
        (np.array([s, -1j * s]), np.array([s, 1j * s])),
        (np.array([1, 0]), np.array([0, 1])),           # +z / -z
        (np.array([0, 1]), np.array([1, 0])),
    ]
    weights, kets_a, kets_b = [], [], []
    for a, anti in axis_kets:
        weights.append(3.0 * p / 6.0)
        kets_a.append(a.astype(complex))
        kets_b.append(anti.astype(complex))
    for i in range(2):
        for j in range(2):
            weights.append((1.0 - 3.0 * p) / 4.0)
            kets_a.append(basis_ket(2, i))
            kets_b.append(basis_ket(2, j))
    return np.array(weights), kets_a, kets_b


def random_product_parts(seed: int = 0, terms: int = 8):
    """Weights and local kets describing a random two-qubit separable mixture."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, terms + 1))
    w = rng.dirichlet(np.ones(k))
    kets_a, kets_b = [], []
    for _ in range(k):
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        kets_a.append(a / np.linalg.norm(a))
        kets_b.append(b / np.linalg.norm(b))
    return w, kets_a, kets_b


def separable_mixture(weights, kets_a, kets_b) -> DensityMatrix:
    """Convex mixture of product pure states sum_i w_i |a_i b_i><a_i b_i|."""
    from .entropy import require_distribution

    w = require_distribution(weights, name="mixture weights")
    d_a = np.asarray(kets_a[0]).size
    d_b = np.asarray(kets_b[0]).size
    m = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
    for p, a, b in zip(w, kets_a, kets_b):
        ket = np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
        m += p * np.outer(ket, ket.conj())
    return DensityMatrix(m, (d_a, d_b))


def random_separable(seed: int = 0) -> DensityMatrix:
    """Random two-qubit separable state: a mixture of at most 8 product pure states."""
    return separable_mixture(*random_product_parts(seed))
