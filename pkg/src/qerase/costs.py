"""Device-dependent erasure costs, measurement optimization, and exclusivity.

The unassisted cost of resetting a memory equals its von Neumann entropy;
a correlated helper who measures her side and announces the outcome lowers
it to the average conditional entropy, minimized over measurements.  For
two qubits the adversary's best cost equals the entanglement of formation
(Wootters), which is what the exclusivity certificate compares against.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .entropy import binary_entropy, von_neumann_entropy
from .linalg import PAULIS, SIGMA_Y, ValidationError
from .measurements import (
    ConditionalEnsemble,
    RankOnePOVM,
    bloch_projectors,
    conditional_ensemble,
)
from .states import DensityMatrix, partial_trace, permute_subsystems, purify

DEFAULT_BUDGET_TOL = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the measurement searches.

    grid_points is the polar resolution of the coarse Bloch grid (the
    azimuthal resolution is twice that); max_outcomes bounds the rank-1
    POVM search used on parties of dimension > 2 (and, when raised above
    the party dimension, enables the POVM search for qubits as well).
    povm_slack is the documented optimality slack of that search.
    """

    restarts: int = 8
    grid_points: int = 36
    refine_tolerance: float = 1e-9
    max_outcomes: int | None = None
    povm_slack: float = 0.02
    seed: int = 1905

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")
        if self.refine_tolerance <= 0:
            raise ValidationError("refine_tolerance must be positive")
        if self.grid_points < 2:
            raise ValidationError("grid_points must be >= 2")


DEFAULT_CONFIG = OptimizerConfig()


# ---------------------------------------------------------------------------
# batched objective machinery
# ---------------------------------------------------------------------------

def _unnormalized_avg_entropy(eigs: np.ndarray) -> np.ndarray:
    """sum_k p_k S(block_k / p_k) from unnormalized block spectra.

    eigs has shape (..., outcomes, d); the identity
    p*S(e/p) = -sum e log2 e + p log2 p avoids explicit normalization and
    is exact in the p -> 0 limit (contribution 0).
    """
    e = np.clip(np.real(eigs), 0.0, None)
    p = e.sum(axis=-1)
    safe_e = np.where(e > 0.0, e, 1.0)
    safe_p = np.where(p > 0.0, p, 1.0)
    contrib = -np.sum(e * np.log2(safe_e), axis=-1) + p * np.log2(safe_p)
    return np.clip(contrib.sum(axis=-1), 0.0, None)


def _eigs_2x2(blocks: np.ndarray) -> np.ndarray:
    """Analytic eigenvalues of stacked 2x2 Hermitian matrices, shape (..., 2)."""
    a = np.real(blocks[..., 0, 0])
    b = np.real(blocks[..., 1, 1])
    c = blocks[..., 0, 1]
    root = np.sqrt(((a - b) / 2.0) ** 2 + np.abs(c) ** 2)
    mid = (a + b) / 2.0
    return np.stack([mid - root, mid + root], axis=-1)


def _block_spectra(blocks: np.ndarray) -> np.ndarray:
    if blocks.shape[-1] == 2:
        return _eigs_2x2(blocks)
    return np.linalg.eigvalsh(blocks)


def directions_from_angles(angles: np.ndarray) -> np.ndarray:
    """Bloch unit vectors for rows of (theta, phi) pairs."""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    th, ph = angles[:, 0], angles[:, 1]
    return np.stack(
        [np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=1
    )


def qubit_avg_entropy_objective(rho: DensityMatrix):
    """Vectorized map (theta, phi) rows -> average conditional entropy of B.

    Valid for bipartite states with a qubit on the measured side; uses the
    Pauli components G_mu = Tr_A[(sigma_mu (x) I) rho] so a whole grid of
    directions is evaluated with one batched spectral call.
    """
    d_a, d_b = rho.dims
    if d_a != 2:
        raise ValidationError("qubit objective requires a 2-dimensional measured side")
    t = rho.matrix.reshape(d_a, d_b, d_a, d_b)
    g0 = np.einsum("ax,xrac->rc", np.eye(2, dtype=complex), t)
    gp = np.stack([np.einsum("ax,xrac->rc", s, t) for s in PAULIS])

    def objective(angles: np.ndarray) -> np.ndarray:
        dirs = directions_from_angles(angles)
        proj = np.einsum("ni,iab->nab", dirs, gp)
        blocks = 0.5 * np.stack([g0[None] + proj, g0[None] - proj], axis=1)
        return _unnormalized_avg_entropy(_block_spectra(blocks))

    return objective


def minimize_qubit_direction(objective, cfg: OptimizerConfig = DEFAULT_CONFIG):
    """Coarse Bloch-sphere grid plus simplex refinement from the best cells.

    objective maps an (N, 2) array of (theta, phi) rows to N values.
    Returns (best value, best (theta, phi), probe count); the value never
    exceeds any probe evaluated.
    """
    thetas = np.linspace(0.0, np.pi, cfg.grid_points)
    phis = np.linspace(0.0, 2.0 * np.pi, 2 * cfg.grid_points, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    grid = np.stack([tt.ravel(), pp.ravel()], axis=1)
    vals = objective(grid)
    probes = grid.shape[0]

    order = np.argsort(vals)
    best_val = float(vals[order[0]])
    best_angles = tuple(grid[order[0]])
    scalar = lambda x: float(objective(np.asarray(x)[None, :])[0])  # noqa: E731
    for idx in order[: cfg.restarts]:
        res = minimize(
            scalar,
            x0=grid[idx],
            method="Nelder-Mead",
            options={"fatol": cfg.refine_tolerance, "xatol": 1e-8, "maxfev": 500},
        )
        probes += int(res.nfev)
        if res.fun < best_val:
            best_val = float(res.fun)
            best_angles = (float(res.x[0]), float(res.x[1]))
    return best_val, best_angles, probes


def _columns_objective(rho: DensityMatrix):
    """Average conditional entropy as a function of POVM column vectors."""
    d_a, d_b = rho.dims
    t = rho.matrix.reshape(d_a, d_b, d_a, d_b)

    def objective(k_cols: np.ndarray) -> float:
        blocks = np.einsum("ai,xi,xrac->irc", k_cols, k_cols.conj(), t)
        return float(_unnormalized_avg_entropy(_block_spectra(blocks)[None])[0])

    return objective


def _orthonormal_rows(x: np.ndarray) -> np.ndarray:
    """Map an arbitrary m x d complex matrix to d x m columns with K K^dag = I."""
    q, _ = np.linalg.qr(x)
    return q.conj().T


def minimize_rank1_povm(rho: DensityMatrix, cfg: OptimizerConfig = DEFAULT_CONFIG):
    """Random rank-1 POVM search with simplex refinement over column parameters.

    POVMs with m outcomes are parameterized by the first d rows of an m x m
    unitary (equivalently, QR retraction of an m x d seed).  The search is
    heuristic: its result is an upper bound on the true minimum with the
    optimality slack documented in the config.
    """
    d_a, _ = rho.dims
    max_m = max(cfg.max_outcomes or d_a, d_a)
    objective = _columns_objective(rho)
    rng = np.random.default_rng(cfg.seed)

    best_val, best_k, probes = np.inf, None, 0

    def consider(k_cols):
        nonlocal best_val, best_k, probes
        val = objective(k_cols)
        probes += 1
        if val < best_val:
            best_val, best_k = val, k_cols
        return val

    consider(np.eye(d_a, dtype=complex))
    for m in range(d_a, max_m + 1):
        start_val, start_k = np.inf, None
        for _ in range(cfg.restarts):
            x = rng.standard_normal((m, d_a)) + 1j * rng.standard_normal((m, d_a))
            k_cols = _orthonormal_rows(x)
            val = consider(k_cols)
            if val < start_val:
                start_val, start_k = val, k_cols

        def scalar(params, m=m):
            x = params[: m * d_a] + 1j * params[m * d_a :]
            return objective(_orthonormal_rows(x.reshape(m, d_a)))

        x0 = start_k.conj().T
        params0 = np.concatenate([np.real(x0).ravel(), np.imag(x0).ravel()])
        res = minimize(
            scalar,
            x0=params0,
            method="Nelder-Mead",
            options={"fatol": cfg.refine_tolerance, "xatol": 1e-8, "maxfev": 6000},
        )
        probes += int(res.nfev)
        if res.fun < best_val:
            x = res.x[: m * d_a] + 1j * res.x[m * d_a :]
            best_val = float(res.fun)
            best_k = _orthonormal_rows(x.reshape(m, d_a))
    return float(best_val), best_k, probes


# ---------------------------------------------------------------------------
# public cost operations
# ---------------------------------------------------------------------------

def unassisted_cost(rho_b: DensityMatrix) -> float:
    """Baseline erasure bill in bits: the entropy of the memory on its own."""
    return von_neumann_entropy(rho_b)


def avg_conditional_entropy(rho_ab: DensityMatrix, povm: RankOnePOVM) -> float:
    """sum_k p_k S(B | outcome k) for a fixed measurement on the helper side."""
    ens = conditional_ensemble(rho_ab, povm)
    return ens.average_entropy()


@dataclass(frozen=True)
class AssistedCostResult:
    bits: float
    measurement: RankOnePOVM
    probes: int


def assisted_cost(
    rho_ab: DensityMatrix, cfg: OptimizerConfig = DEFAULT_CONFIG
) -> AssistedCostResult:
    """Minimal average erasure bill of B over the helper's measurements.

    Qubit helpers are searched over projective Bloch pairs (grid plus
    refinement); larger helpers, or configs with max_outcomes above the
    helper dimension, additionally run the rank-1 POVM search.
    """
    if len(rho_ab.dims) != 2:
        raise ValidationError(f"expected a bipartite state, got dims {rho_ab.dims}")
    d_a = rho_ab.dims[0]
    candidates = []
    probes = 0
    if d_a == 2:
        objective = qubit_avg_entropy_objective(rho_ab)
        val, angles, n = minimize_qubit_direction(objective, cfg)
        candidates.append((val, bloch_projectors(*angles)))
        probes += n
    if d_a > 2 or (cfg.max_outcomes or d_a) > d_a:
        val, k_cols, n = minimize_rank1_povm(rho_ab, cfg)
        candidates.append((val, RankOnePOVM.from_columns(k_cols)))
        probes += n
    best_val, best_povm = min(candidates, key=lambda c: c[0])
    return AssistedCostResult(bits=max(best_val, 0.0), measurement=best_povm, probes=probes)


def one_way_classical_corr(
    rho_ab: DensityMatrix, cfg: OptimizerConfig = DEFAULT_CONFIG
) -> float:
    """Entropy drop S(B) - min_M S(B|M) the helper's announcements can buy."""
    s_b = von_neumann_entropy(partial_trace(rho_ab, [1]))
    w = assisted_cost(rho_ab, cfg).bits
    return float(np.clip(s_b - w, 0.0, s_b))


def holevo_chi(ens: ConditionalEnsemble) -> float:
    """Holevo bound chi = S(avg) - sum_k p_k S(state_k) on accessible information."""
    chi = von_neumann_entropy(ens.average()) - ens.average_entropy()
    return max(chi, 0.0)


def conditional_vn_entropy_cq(ens: ConditionalEnsemble) -> float:
    """S(X|Q) = S(XQ) - S(Q) of the classical-quantum state the ensemble defines.

    Built explicitly as the block-diagonal operator sum_x p_x |x><x| (x) rho_x.
    Nonnegative for cq states up to numerical noise.
    """
    m = len(ens.states)
    d = ens.states[0].dim
    block = np.zeros((m * d, m * d), dtype=complex)
    for i, (p, s) in enumerate(zip(ens.probabilities, ens.states)):
        block[i * d : (i + 1) * d, i * d : (i + 1) * d] = p * s.matrix
    joint = DensityMatrix(block, (m, d))
    return von_neumann_entropy(joint) - von_neumann_entropy(ens.average())


def eof_pure(psi_ab: DensityMatrix) -> float:
    """Entanglement (ebits) of a pure bipartite state: entropy of a marginal."""
    if len(psi_ab.dims) != 2:
        raise ValidationError(f"expected a bipartite state, got dims {psi_ab.dims}")
    if not psi_ab.is_pure():
        raise ValidationError(
            f"eof_pure requires a rank-1 state; purity is {psi_ab.purity()!r}"
        )
    return von_neumann_entropy(partial_trace(psi_ab, [1]))


def concurrence(rho_ab: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state from the spin-flipped spectrum.

    The four roots are computed as the singular values of
    sqrt(rho) (sigma_y (x) sigma_y) sqrt(rho)^*, which keeps full precision
    even when some roots are near zero.
    """
    if rho_ab.dims != (2, 2):
        raise ValidationError(f"concurrence requires dims (2, 2), got {rho_ab.dims}")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    vals, vecs = np.linalg.eigh(rho_ab.matrix)
    sqrt_rho = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    roots = np.linalg.svd(sqrt_rho @ yy @ sqrt_rho.conj(), compute_uv=False)
    return max(0.0, float(roots[0] - roots[1] - roots[2] - roots[3]))


def eof_two_qubit(rho_ab: DensityMatrix) -> tuple[float, float]:
    """(concurrence, entanglement of formation) for a two-qubit state."""
    c = concurrence(rho_ab)
    ef = binary_entropy((1.0 + np.sqrt(max(1.0 - c * c, 0.0))) / 2.0)
    return c, ef


@dataclass(frozen=True)
class KoashiWinterReport:
    """Residual of the trade-off between helper correlations and environment entanglement.

    residual_bits = [S(B) - J(B|E)_numerical] - E_f(A:B).  The numerical
    environment-side optimization can only underestimate J(B|E), so the
    residual is one-sidedly nonnegative up to tolerance, and bounded above
    by the declared search slack when the optimizer is effective.
    """

    memory_entropy_bits: float
    env_classical_corr_bits: float
    entanglement_of_formation_bits: float
    residual_bits: float
    declared_slack: float
    environment_dim: int
    probes: int

    def within_contract(self, lower: float = -1e-6) -> bool:
        return lower <= self.residual_bits <= self.declared_slack


def koashi_winter_check(
    rho_ab: DensityMatrix, cfg: OptimizerConfig = DEFAULT_CONFIG
) -> KoashiWinterReport:
    """Numerically probe J(B|E) on a purification and compare with E_f(A:B)."""
    if rho_ab.dims != (2, 2):
        raise ValidationError(
            f"koashi_winter_check requires a two-qubit state, got dims {rho_ab.dims}"
        )
    s_b = von_neumann_entropy(partial_trace(rho_ab, [1]))
    _, ef = eof_two_qubit(rho_ab)
    pur = purify(rho_ab)
    d_e = pur.environment_dim
    if d_e == 1:
        j_be, probes = 0.0, 0
    else:
        rho_be = partial_trace(pur.state, [1, 2])
        rho_eb = permute_subsystems(rho_be, [1, 0])
        cfg_e = replace(cfg, max_outcomes=max(cfg.max_outcomes or 0, 2 * d_e))
        res = assisted_cost(rho_eb, cfg_e)
        j_be, probes = s_b - res.bits, res.probes
    residual = (s_b - j_be) - ef
    return KoashiWinterReport(
        memory_entropy_bits=s_b,
        env_classical_corr_bits=j_be,
        entanglement_of_formation_bits=ef,
        residual_bits=residual,
        declared_slack=cfg.povm_slack,
        environment_dim=d_e,
        probes=probes,
    )


@dataclass(frozen=True)
class ErasureReport:
    """Costs and the exclusivity verdict for one bipartite input state."""

    unassisted_bits: float
    assisted_bits: float
    classical_corr_bits: float
    budget_bits: float
    exclusive: bool
    adversary_bits: float | None = None
    entanglement_of_formation_bits: float | None = None
    gap_bits: float | None = None
    reason: str | None = None
    probes: int = 0

    def __post_init__(self):
        if abs(self.assisted_bits - (self.unassisted_bits - self.classical_corr_bits)) > 1e-9:
            raise ValidationError(
                "erasure report inconsistent: assisted != unassisted - classical"
            )
        if not -1e-9 <= self.classical_corr_bits <= self.unassisted_bits + 1e-9:
            raise ValidationError(
                f"classical correlation {self.classical_corr_bits!r} outside "
                f"[0, {self.unassisted_bits!r}]"
            )

    def to_json_dict(self) -> dict:
        return {
            "unassisted_bits": self.unassisted_bits,
            "assisted_bits": self.assisted_bits,
            "classical_corr_bits": self.classical_corr_bits,
            "adversary_bits": self.adversary_bits,
            "entanglement_of_formation_bits": self.entanglement_of_formation_bits,
            "gap_bits": self.gap_bits,
            "budget_bits": self.budget_bits,
            "exclusive": self.exclusive,
            "reason": self.reason,
            "probes": self.probes,
        }


def exclusivity_dd(
    rho_ab: DensityMatrix,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
    w_max: float | None = None,
) -> ErasureReport:
    """Device-dependent exclusivity for two qubits.

    The adversary's best cost equals the entanglement of formation; the
    helper holds exclusive control when her cost fits the budget while the
    adversary's strictly exceeds it.  The default budget is the helper's
    own cost.
    """
    if rho_ab.dims != (2, 2):
        raise ValidationError(
            f"exclusivity_dd requires a two-qubit state, got dims {rho_ab.dims}"
        )
    s_b = von_neumann_entropy(partial_trace(rho_ab, [1]))
    res = assisted_cost(rho_ab, cfg)
    w_a = res.bits
    _, ef = eof_two_qubit(rho_ab)
    w_e = ef
    budget = w_a if w_max is None else float(w_max)
    exclusive = (w_a <= budget + DEFAULT_BUDGET_TOL) and (budget < w_e)
    reason = None
    if not exclusive:
        if budget + DEFAULT_BUDGET_TOL < w_a:
            reason = "cap below assisted cost"
        else:
            reason = "adversary cost within cap"
    return ErasureReport(
        unassisted_bits=s_b,
        assisted_bits=w_a,
        classical_corr_bits=s_b - w_a,
        adversary_bits=w_e,
        entanglement_of_formation_bits=ef,
        gap_bits=w_e - w_a,
        budget_bits=budget,
        exclusive=exclusive,
        reason=reason,
        probes=res.probes,
    )
