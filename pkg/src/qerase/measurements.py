"""Measurements, dephasing channels, conditional ensembles, basis complementarity."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .entropy import require_distribution, von_neumann_entropy
from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, ValidationError
from .states import DensityMatrix, partial_trace

ORTHONORMALITY_TOL = 1e-9
COMPLETENESS_TOL = 1e-8
RANK_ONE_TOL = 1e-8
OUTCOME_CUTOFF = 1e-12
ENSEMBLE_AVG_TOL = 1e-9


@dataclass(frozen=True)
class ProjectiveBasis:
    """Orthonormal basis, stored as the columns of a unitary matrix."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValidationError(f"basis must be square, got shape {v.shape}")
        gram = v.conj().T @ v
        dev = np.max(np.abs(gram - np.eye(v.shape[0])))
        if dev > ORTHONORMALITY_TOL:
            raise ValidationError(
                f"basis is not orthonormal: max |V^dag V - I| = {dev:.3e}"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def ket(self, i: int) -> np.ndarray:
        return self.vectors[:, i]

    def projector(self, i: int) -> np.ndarray:
        v = self.vectors[:, i]
        return np.outer(v, v.conj())

    @staticmethod
    def computational(dim: int = 2) -> "ProjectiveBasis":
        return ProjectiveBasis(np.eye(dim, dtype=complex))

    @staticmethod
    def hadamard() -> "ProjectiveBasis":
        return ProjectiveBasis(np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2))

    @staticmethod
    def fourier(dim: int) -> "ProjectiveBasis":
        """Discrete-Fourier basis; mutually unbiased with the computational one."""
        w = np.exp(2j * np.pi / dim)
        cols = np.array([[w ** (j * k) for k in range(dim)] for j in range(dim)])
        return ProjectiveBasis(cols / np.sqrt(dim))

    def to_json_dict(self) -> dict:
        cols = [self.vectors[:, j] for j in range(self.dim)]
        return {
            "dim": self.dim,
            "vectors_re": [np.real(c).tolist() for c in cols],
            "vectors_im": [np.imag(c).tolist() for c in cols],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ProjectiveBasis":
        for key in ("dim", "vectors_re", "vectors_im"):
            if key not in data:
                raise ValidationError(f"basis JSON is missing required field '{key}'")
        re = np.asarray(data["vectors_re"], dtype=float)
        im = np.asarray(data["vectors_im"], dtype=float)
        return ProjectiveBasis((re + 1j * im).T)


def load_basis(path) -> ProjectiveBasis:
    with open(path) as fh:
        return ProjectiveBasis.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class RankOnePOVM:
    """Positive rank-1 elements resolving the identity; at least dim outcomes."""

    elements: np.ndarray  # shape (m, dim, dim)

    def __post_init__(self):
        e = np.asarray(self.elements, dtype=complex)
        if e.ndim != 3 or e.shape[1] != e.shape[2]:
            raise ValidationError(f"POVM elements must be (m, d, d), got {e.shape}")
        m, d, _ = e.shape
        if m < d:
            raise ValidationError(f"rank-1 POVM needs at least {d} outcomes, got {m}")
        total = e.sum(axis=0)
        dev = np.max(np.abs(total - np.eye(d)))
        if dev > COMPLETENESS_TOL:
            raise ValidationError(f"POVM does not resolve identity: deviation {dev:.3e}")
        for k in range(m):
            vals = np.linalg.eigvalsh(e[k])
            if vals[0] < -RANK_ONE_TOL:
                raise ValidationError(f"POVM element {k} is not PSD (min eig {vals[0]:.3e})")
            if d > 1 and vals[-2] > RANK_ONE_TOL:
                raise ValidationError(
                    f"POVM element {k} has rank > 1 (second eigenvalue {vals[-2]:.3e})"
                )
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "elements", e)

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def outcomes(self) -> int:
        return self.elements.shape[0]

    @staticmethod
    def from_basis(basis: ProjectiveBasis) -> "RankOnePOVM":
        e = np.stack([basis.projector(i) for i in range(basis.dim)])
        return RankOnePOVM(e)

    @staticmethod
    def from_columns(k: np.ndarray) -> "RankOnePOVM":
        """Elements |v_i><v_i| from the columns of a d x m matrix with K K^dag = I."""
        k = np.asarray(k, dtype=complex)
        e = np.stack([np.outer(k[:, i], k[:, i].conj()) for i in range(k.shape[1])])
        return RankOnePOVM(e)


def bloch_projectors(theta: float, phi: float) -> RankOnePOVM:
    """Qubit projector pair (I +/- n.sigma)/2 along the Bloch direction (theta, phi)."""
    n = np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )
    ns = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
    eye = np.eye(2, dtype=complex)
    return RankOnePOVM(np.stack([(eye + ns) / 2, (eye - ns) / 2]))


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Outcome probabilities paired with the post-measurement states they select."""

    probabilities: np.ndarray
    states: tuple[DensityMatrix, ...]

    def __post_init__(self):
        p = require_distribution(self.probabilities, name="ensemble probabilities")
        if len(self.states) != p.size:
            raise ValidationError(
                f"{p.size} probabilities for {len(self.states)} states"
            )
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "states", tuple(self.states))

    def average(self) -> DensityMatrix:
        m = sum(p * s.matrix for p, s in zip(self.probabilities, self.states))
        return DensityMatrix(m, self.states[0].dims)

    def average_entropy(self) -> float:
        return float(
            sum(p * von_neumann_entropy(s) for p, s in zip(self.probabilities, self.states))
        )


def _conditional_raw(rho: DensityMatrix, povm: RankOnePOVM):
    """Probabilities and unnormalized reduced matrices for a POVM on subsystem 0."""
    if len(rho.dims) != 2:
        raise ValidationError(f"expected a bipartite state, got dims {rho.dims}")
    d_a, d_b = rho.dims
    if povm.dim != d_a:
        raise ValidationError(f"POVM dimension {povm.dim} != measured subsystem {d_a}")
    t = rho.matrix.reshape(d_a, d_b, d_a, d_b)
    probs, blocks = [], []
    for k in range(povm.outcomes):
        # Tr_A[(Pi_k (x) I) rho]; element indices contract against A's row/col
        block = np.einsum("ij,jaib->ab", povm.elements[k], t)
        p = float(np.real(np.trace(block)))
        probs.append(p)
        blocks.append(block)
    return np.array(probs), blocks


def conditional_ensemble(rho: DensityMatrix, povm: RankOnePOVM) -> ConditionalEnsemble:
    """Measure subsystem 0; return {p_k, conditional state on subsystem 1}.

    Outcomes with probability below 1e-12 are dropped (their conditional
    state would be 0/0).  The weighted average of the ensemble reproduces
    the unmeasured marginal, which is validated here.
    """
    probs, blocks = _conditional_raw(rho, povm)
    keep = probs > OUTCOME_CUTOFF
    probs, blocks = probs[keep], [b for b, k in zip(blocks, keep) if k]
    d_b = rho.dims[1]
    states = tuple(DensityMatrix(b / p, (d_b,)) for p, b in zip(probs, blocks))
    ens = ConditionalEnsemble(probs / probs.sum(), states)
    marginal = partial_trace(rho, [1])
    from .linalg import trace_distance

    dev = trace_distance(ens.average(), marginal)
    if dev > ENSEMBLE_AVG_TOL:
        raise ValidationError(
            f"ensemble average deviates from the marginal by {dev:.3e}"
        )
    return ens


def dephase(rho: DensityMatrix, basis: ProjectiveBasis, subsystem: int = 0) -> DensityMatrix:
    """Remove coherences of one subsystem in the given basis.

    Implements sum_i P_i rho P_i with P_i the basis projectors embedded at
    the subsystem slot; idempotent and entropy non-decreasing.
    """
    n = len(rho.dims)
    if not 0 <= subsystem < n:
        raise ValidationError(f"subsystem {subsystem} out of range for dims {rho.dims}")
    if basis.dim != rho.dims[subsystem]:
        raise ValidationError(
            f"basis dimension {basis.dim} != subsystem dimension {rho.dims[subsystem]}"
        )
    before = int(np.prod(rho.dims[:subsystem]))
    after = int(np.prod(rho.dims[subsystem + 1 :]))
    out = np.zeros_like(rho.matrix)
    for i in range(basis.dim):
        p = np.kron(np.eye(before), np.kron(basis.projector(i), np.eye(after)))
        out += p @ rho.matrix @ p
    return DensityMatrix(out, rho.dims)


def outcome_distribution(rho: DensityMatrix, basis: ProjectiveBasis, subsystem: int = 0) -> np.ndarray:
    """Diagonal of the subsystem marginal in the given basis."""
    marginal = rho if len(rho.dims) == 1 else partial_trace(rho, [subsystem])
    v = basis.vectors
    probs = np.real(np.einsum("ik,ij,jk->k", v.conj(), marginal.matrix, v))
    return require_distribution(probs, name="outcome distribution")


def joint_distribution(
    rho: DensityMatrix, povm_a: RankOnePOVM, basis_b: ProjectiveBasis
) -> np.ndarray:
    """Joint outcome table p[a, b] = Tr[(Pi_a (x) |b><b|) rho] on a bipartite state."""
    if len(rho.dims) != 2:
        raise ValidationError(f"expected a bipartite state, got dims {rho.dims}")
    d_a, d_b = rho.dims
    if povm_a.dim != d_a or basis_b.dim != d_b:
        raise ValidationError(
            f"measurement dims ({povm_a.dim}, {basis_b.dim}) != state dims {rho.dims}"
        )
    t = rho.matrix.reshape(d_a, d_b, d_a, d_b)
    v = basis_b.vectors
    # p[a,b] = sum_{ij,kl} Pi_a[j,i] v[k,b]* v[l,b] rho[i k, j l]
    table = np.real(np.einsum("aji,kb,lb,ikjl->ab", povm_a.elements, v.conj(), v, t))
    table = np.clip(table, 0.0, None)
    require_distribution(table.ravel(), name="joint outcome distribution")
    return table


def complementarity(r: ProjectiveBasis, s: ProjectiveBasis) -> float:
    """Maassen-Uffink incompatibility constant -2 log2 max_ij |<r_i|s_j>| in bits."""
    if r.dim != s.dim:
        raise ValidationError(f"basis dimensions differ: {r.dim} vs {s.dim}")
    overlap = float(np.max(np.abs(r.vectors.conj().T @ s.vectors)))
    overlap = min(overlap, 1.0)
    return -2.0 * float(np.log2(overlap))
