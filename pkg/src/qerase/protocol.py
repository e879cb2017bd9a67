"""Dephasing-based erasure protocol with untrusted announcements.

Bob trusts only his own device.  Each run he picks one of two bases at
random and dephases his memory in it; the helper (honest or not) announces
a classical symbol; Bob applies a pre-agreed correction, erases within his
work budget, and verifies the reset with a work-extraction test.  The
observed assisted cost is compared against a state-independent floor that
every local-hidden-state simulation must respect, so beating the floor
certifies steering and with it an advantage no adversary can match.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .costs import (
    DEFAULT_CONFIG,
    OptimizerConfig,
    directions_from_angles,
    minimize_qubit_direction,
)
from .entropy import _neg_xlog2x, require_distribution, shannon_entropy
from .linalg import PAULIS, ValidationError, dagger
from .measurements import (
    ProjectiveBasis,
    RankOnePOVM,
    complementarity,
    joint_distribution,
    outcome_distribution,
)
from .states import DensityMatrix

OUTCOME_CUTOFF = 1e-12
MODEL_MARGINAL_TOL = 1e-8
DEFAULT_VERIFY_EPSILON = 1e-6
CERTIFY_TOL = 1e-9


# ---------------------------------------------------------------------------
# announcement strategies
# ---------------------------------------------------------------------------

class Strategy:
    """Rule producing the joint table p[announcement, dephased outcome] per basis."""

    label: str = "strategy"

    def joint_with(
        self, rho_ab: DensityMatrix, basis_label: str, basis: ProjectiveBasis
    ) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class MeasurementStrategy(Strategy):
    """Announce the outcome of a per-basis measurement on the helper side."""

    povms: dict[str, RankOnePOVM]
    label: str = "measurement"

    def joint_with(self, rho_ab, basis_label, basis):
        if basis_label not in self.povms:
            raise ValidationError(f"strategy has no measurement for basis {basis_label!r}")
        return joint_distribution(rho_ab, self.povms[basis_label], basis)


def matched_strategy(r_basis: ProjectiveBasis, s_basis: ProjectiveBasis) -> MeasurementStrategy:
    """Honest helper: measure the announced basis on the helper's own side."""
    return MeasurementStrategy(
        povms={"R": RankOnePOVM.from_basis(r_basis), "S": RankOnePOVM.from_basis(s_basis)},
        label="honest-matched",
    )


def wrong_basis_strategy(r_basis: ProjectiveBasis, s_basis: ProjectiveBasis) -> MeasurementStrategy:
    """Adversary measuring the complementary basis on every run."""
    return MeasurementStrategy(
        povms={"R": RankOnePOVM.from_basis(s_basis), "S": RankOnePOVM.from_basis(r_basis)},
        label="wrong-basis",
    )


def optimized_strategy(
    rho_ab: DensityMatrix,
    r_basis: ProjectiveBasis,
    s_basis: ProjectiveBasis,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> MeasurementStrategy:
    """Per-basis projective measurement minimizing Bob's conditional entropy.

    Qubit helpers only; each branch is optimized independently with the
    same grid-plus-refinement search used for the device-dependent cost.
    """
    if rho_ab.dims[0] != 2:
        raise ValidationError("optimized_strategy requires a qubit helper")
    povms = {}
    for key, basis in (("R", r_basis), ("S", s_basis)):
        objective = _qubit_shannon_objective(rho_ab, basis)
        _, angles, _ = minimize_qubit_direction(objective, cfg)
        from .measurements import bloch_projectors

        povms[key] = bloch_projectors(*angles)
    return MeasurementStrategy(povms=povms, label="optimized")


def _qubit_shannon_objective(rho_ab: DensityMatrix, basis: ProjectiveBasis):
    """Vectorized (theta, phi) -> H(basis outcome | announcement) in bits."""
    d_a, d_b = rho_ab.dims
    if d_a != 2:
        raise ValidationError("Shannon objective requires a qubit helper")
    t = rho_ab.matrix.reshape(d_a, d_b, d_a, d_b)
    v = basis.vectors
    # A_b = Tr_B[(I (x) |b><b|) rho] for each outcome b
    ab = np.einsum("kb,xb,ixjk->bij", v, v.conj(), t)
    tr_b = np.real(np.einsum("bii->b", ab))
    tvec = np.real(np.einsum("mji,bij->bm", np.stack(PAULIS), ab))

    def objective(angles: np.ndarray) -> np.ndarray:
        dirs = directions_from_angles(angles)
        corr = dirs @ tvec.T  # (n, b)
        joint = 0.5 * np.stack([tr_b[None, :] + corr, tr_b[None, :] - corr], axis=1)
        joint = np.clip(joint, 0.0, None)
        safe = np.where(joint > 0.0, joint, 1.0)
        h_joint = -np.sum(joint * np.log2(safe), axis=(1, 2))
        marg = joint.sum(axis=2)
        safe_m = np.where(marg > 0.0, marg, 1.0)
        h_marg = -np.sum(marg * np.log2(safe_m), axis=1)
        return h_joint - h_marg

    return objective


@dataclass(frozen=True)
class ConstantStrategy(Strategy):
    """Announces the same symbol every run; carries no information."""

    symbol: int = 0
    alphabet: int = 2
    label: str = "constant"

    def joint_with(self, rho_ab, basis_label, basis):
        r = outcome_distribution(rho_ab, basis, subsystem=1)
        joint = np.zeros((self.alphabet, r.size))
        joint[self.symbol] = r
        return joint


@dataclass(frozen=True)
class UniformRandomStrategy(Strategy):
    """Announces a uniformly random symbol, independent of everything."""

    alphabet: int = 2
    label: str = "uniform-random"

    def joint_with(self, rho_ab, basis_label, basis):
        r = outcome_distribution(rho_ab, basis, subsystem=1)
        return np.tile(r / self.alphabet, (self.alphabet, 1))


@dataclass(frozen=True)
class LhsModel:
    """Local-hidden-state simulation: lambda weights, Bob-side states, response rule.

    response[basis_label][lam, symbol] is the probability that the
    announcement equals `symbol` given the hidden variable, for that branch.
    """

    weights: np.ndarray
    hidden_states: tuple[DensityMatrix, ...]
    response: dict[str, np.ndarray]

    def __post_init__(self):
        w = require_distribution(self.weights, name="hidden-variable weights")
        if len(self.hidden_states) != w.size:
            raise ValidationError(
                f"{w.size} weights for {len(self.hidden_states)} hidden states"
            )
        dims = {s.dim for s in self.hidden_states}
        if len(dims) != 1:
            raise ValidationError(f"hidden states have mixed dimensions {dims}")
        resp = {}
        for key, q in self.response.items():
            q = np.asarray(q, dtype=float)
            if q.ndim != 2 or q.shape[0] != w.size:
                raise ValidationError(
                    f"response table for basis {key!r} must be (n_lambda, symbols)"
                )
            for lam in range(q.shape[0]):
                require_distribution(q[lam], name=f"response row lambda={lam} basis={key}")
            q = q.copy()
            q.setflags(write=False)
            resp[key] = q
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "response", resp)
        object.__setattr__(self, "hidden_states", tuple(self.hidden_states))

    def average_state(self) -> DensityMatrix:
        m = sum(p * s.matrix for p, s in zip(self.weights, self.hidden_states))
        return DensityMatrix(m, self.hidden_states[0].dims)


@dataclass(frozen=True)
class HiddenVariableStrategy(Strategy):
    """Announcements replayed from a hidden-variable register via the model's rule."""

    model: LhsModel
    holder: str = "alice"
    label: str = "lhs"

    def joint_with(self, rho_ab, basis_label, basis):
        if basis_label not in self.model.response:
            raise ValidationError(f"model has no response rule for basis {basis_label!r}")
        hidden_diag = np.stack(
            [outcome_distribution(s, basis) for s in self.model.hidden_states]
        )
        if rho_ab is not None:
            model_marg = self.model.weights @ hidden_diag
            actual = outcome_distribution(rho_ab, basis, subsystem=1)
            dev = float(np.max(np.abs(model_marg - actual)))
            if dev > MODEL_MARGINAL_TOL:
                raise ValidationError(
                    f"hidden-state model marginal deviates from the state by {dev:.3e} "
                    f"in basis {basis_label!r}"
                )
        q = self.model.response[basis_label]
        # p[k, i] = sum_lam w_lam q[lam, k] <x_i| rho_lam |x_i>
        return np.einsum("l,lk,li->ki", self.model.weights, q, hidden_diag)


def lhs_eve_strategy(model: LhsModel) -> HiddenVariableStrategy:
    """Adversary cloning the hidden register and replaying the same response rule.

    The induced joint tables are identical to the model holder's by
    construction, so the observed costs agree exactly.
    """
    return HiddenVariableStrategy(model=model, holder="eve", label="lambda-replay")


def lhs_model_from_separable(
    weights, kets_a, kets_b, r_basis: ProjectiveBasis, s_basis: ProjectiveBasis
) -> LhsModel:
    """Hidden-variable simulation of a separable mixture of product pure states.

    The hidden variable is the mixture index; Bob's pre-existing state is
    the local ket, and the announcement honestly reports a measurement of
    the helper's local ket in the announced basis.
    """
    from .states import pure_state

    w = require_distribution(weights, name="mixture weights")
    hidden = tuple(pure_state(b) for b in kets_b)
    response = {}
    for key, basis in (("R", r_basis), ("S", s_basis)):
        q = np.stack(
            [
                np.abs(basis.vectors.conj().T @ np.asarray(a, dtype=complex)) ** 2
                for a in kets_a
            ]
        )
        response[key] = q / q.sum(axis=1, keepdims=True)
    return LhsModel(weights=w, hidden_states=hidden, response=response)


@dataclass(frozen=True)
class InterceptResendStrategy(Strategy):
    """Classical-channel attack: garble the inner strategy's announcements."""

    inner: Strategy
    channel: np.ndarray  # channel[k_out, k_in], columns are distributions
    label: str = "intercept-resend"

    def joint_with(self, rho_ab, basis_label, basis):
        t = np.asarray(self.channel, dtype=float)
        cols = t.sum(axis=0)
        if np.any(t < -1e-12) or np.max(np.abs(cols - 1.0)) > 1e-10:
            raise ValidationError("intercept-resend channel columns must be distributions")
        return t @ self.inner.joint_with(rho_ab, basis_label, basis)


# ---------------------------------------------------------------------------
# observed costs, floor, certificate
# ---------------------------------------------------------------------------

def conditional_outcome_entropy(joint: np.ndarray) -> float:
    """H(outcome | announcement) in bits from a joint table p[announcement, outcome]."""
    joint = np.clip(np.asarray(joint, dtype=float), 0.0, None)
    return _neg_xlog2x(joint.ravel()) - _neg_xlog2x(joint.sum(axis=1))


def unassisted_dephased_cost(
    rho_b: DensityMatrix, r_basis: ProjectiveBasis, s_basis: ProjectiveBasis
) -> float:
    """Average erasure bill (H(R)+H(S))/2 after random dephasing, no helper."""
    h_r = shannon_entropy(outcome_distribution(rho_b, r_basis))
    h_s = shannon_entropy(outcome_distribution(rho_b, s_basis))
    return 0.5 * (h_r + h_s)


def observed_assisted_cost(
    rho_ab: DensityMatrix,
    r_basis: ProjectiveBasis,
    s_basis: ProjectiveBasis,
    strategy: Strategy,
) -> float:
    """Average residual bill (H(R|A_R)+H(S|A_S))/2 under a given announcement rule."""
    total = 0.0
    for key, basis in (("R", r_basis), ("S", s_basis)):
        total += conditional_outcome_entropy(strategy.joint_with(rho_ab, key, basis))
    return 0.5 * total


def lhs_floor(r_basis: ProjectiveBasis, s_basis: ProjectiveBasis) -> float:
    """State-independent bill floor for any local-hidden-state simulation."""
    return 0.5 * complementarity(r_basis, s_basis)


@dataclass(frozen=True)
class SteeringCertificate:
    """Verdict of the observed-cost-vs-floor comparison.

    When `fired`, the observed correlations admit no local-hidden-state
    model and the helper's advantage is exclusive: every adversary's
    observed cost is at least the floor, hence strictly above the helper's.
    """

    observed_cost_bits: float
    floor_bits: float
    fired: bool
    margin_bits: float
    tolerance: float = CERTIFY_TOL

    def __post_init__(self):
        expected = self.observed_cost_bits < self.floor_bits - self.tolerance
        if self.fired != expected:
            raise ValidationError("certificate flag inconsistent with its margin")

    @property
    def exclusive_advantage(self) -> bool:
        return self.fired

    def to_json_dict(self) -> dict:
        return {
            "observed_cost_bits": self.observed_cost_bits,
            "floor_bits": self.floor_bits,
            "fired": self.fired,
            "margin_bits": self.margin_bits,
            "tolerance": self.tolerance,
            "exclusive_advantage": self.exclusive_advantage,
        }


def certify_steering(
    rho_ab: DensityMatrix,
    r_basis: ProjectiveBasis,
    s_basis: ProjectiveBasis,
    strategy: Strategy,
    tolerance: float = CERTIFY_TOL,
) -> SteeringCertificate:
    observed = observed_assisted_cost(rho_ab, r_basis, s_basis, strategy)
    floor = lhs_floor(r_basis, s_basis)
    return SteeringCertificate(
        observed_cost_bits=observed,
        floor_bits=floor,
        fired=observed < floor - tolerance,
        margin_bits=floor - observed,
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# Szilard-type verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationResult:
    extractable_work_bits: float
    passed: bool
    mode: str = "exact"


def _diagonal_distribution(rho_final) -> np.ndarray:
    m = getattr(rho_final, "matrix", rho_final)
    diag = np.clip(np.real(np.diagonal(m)), 0.0, None)
    return require_distribution(diag, name="memory diagonal")


def szilard_verify(
    rho_final,
    mode: str = "exact",
    epsilon: float = DEFAULT_VERIFY_EPSILON,
    shots: int | None = None,
    seed: int | None = None,
) -> VerificationResult:
    """Cost-free reset test: dephase in the computational basis, extract work.

    A fully reset d-dimensional memory yields log2 d bits of extractable
    work; any residual mixing shows up as a deficit.  The test passes when
    the (exact or sampled plug-in) extractable work is within epsilon of
    the maximum.  The dephasing outcome itself is never read out.
    """
    diag = _diagonal_distribution(rho_final)
    full = float(np.log2(diag.size))
    if mode == "exact":
        work = full - _neg_xlog2x(diag)
        return VerificationResult(work, passed=work >= full - epsilon, mode="exact")
    if mode == "sampled":
        if shots is None or seed is None:
            raise ValidationError("sampled verification requires shots and seed")
        rng = np.random.Generator(np.random.Philox(key=[int(seed), 0]))
        work = full - _sampled_plugin_entropy(diag, int(shots), rng)
        return VerificationResult(work, passed=work >= full - epsilon, mode="sampled")
    raise ValidationError(f"unknown verification mode {mode!r}")


def _sampled_plugin_entropy(diag: np.ndarray, shots: int, rng) -> float:
    cum = np.cumsum(diag)
    cum[-1] = 1.0
    draws = np.searchsorted(cum, rng.random(shots), side="right")
    freq = np.bincount(draws, minlength=diag.size) / shots
    return _neg_xlog2x(freq)


# ---------------------------------------------------------------------------
# protocol simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrectionTable:
    """Per-basis, per-announcement unitaries Bob applies before erasing."""

    unitaries: dict[str, dict[int, np.ndarray]]
    labels: dict[str, dict[int, str]] = field(default_factory=dict)

    def unitary(self, basis_label: str, symbol: int) -> np.ndarray:
        try:
            u = self.unitaries[basis_label][symbol]
        except KeyError:
            raise ValidationError(
                f"no correction for announcement {symbol!r} in basis {basis_label!r}"
            ) from None
        u = np.asarray(u, dtype=complex)
        dev = np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0])))
        if dev > 1e-9:
            raise ValidationError(
                f"correction for {basis_label!r}/{symbol!r} is not unitary "
                f"(deviation {dev:.3e})"
            )
        return u

    def label(self, basis_label: str, symbol: int) -> str:
        return self.labels.get(basis_label, {}).get(symbol, f"{basis_label}:{symbol}")


def identity_corrections(alphabet: int, dim: int = 2) -> CorrectionTable:
    eye = np.eye(dim, dtype=complex)
    table = {bl: {k: eye for k in range(alphabet)} for bl in ("R", "S")}
    names = {bl: {k: "I" for k in range(alphabet)} for bl in ("R", "S")}
    return CorrectionTable(table, names)


def honest_bell_corrections() -> CorrectionTable:
    """Corrections completing erasure for a phi_plus pair with Z/X dephasing."""
    eye = np.eye(2, dtype=complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    z = np.diag([1.0, -1.0]).astype(complex)
    return CorrectionTable(
        unitaries={"R": {0: eye, 1: x}, "S": {0: h, 1: h @ z}},
        labels={"R": {0: "I", 1: "X"}, "S": {0: "H", 1: "HZ"}},
    )


@dataclass(frozen=True)
class ProtocolRunRecord:
    index: int
    basis: str
    outcome: int  # dephased outcome; bookkeeping only, never used by the logic
    announcement: int
    correction: str
    committed: bool
    work_spent: float
    extractable_work: float
    passed: bool


@dataclass(frozen=True)
class ProtocolSummary:
    runs: int
    mean_cost_bits: float
    pass_rate: float
    over_budget_runs: int
    per_basis_conditional_entropy: dict[str, float]
    observed_cost_bits: float
    floor_bits: float
    certificate: SteeringCertificate
    w_max: float
    seed: int
    verification_mode: str

    def to_json_dict(self) -> dict:
        return {
            "runs": self.runs,
            "mean_cost_bits": self.mean_cost_bits,
            "pass_rate": self.pass_rate,
            "over_budget_runs": self.over_budget_runs,
            "per_basis_conditional_entropy": dict(self.per_basis_conditional_entropy),
            "observed_cost_bits": self.observed_cost_bits,
            "floor_bits": self.floor_bits,
            "certificate": self.certificate.to_json_dict(),
            "w_max": self.w_max,
            "seed": self.seed,
            "verification_mode": self.verification_mode,
        }


@dataclass(frozen=True)
class SimulationResult:
    records: tuple[ProtocolRunRecord, ...]
    summary: ProtocolSummary


def _run_rng(seed: int, run_index: int) -> np.random.Generator:
    # counter-based keying: run r's stream depends only on (seed, r), so any
    # execution order reproduces the identical record list
    return np.random.Generator(np.random.Philox(key=[int(seed), int(run_index)]))


def simulate_protocol(
    rho_ab: DensityMatrix,
    r_basis: ProjectiveBasis,
    s_basis: ProjectiveBasis,
    strategy: Strategy,
    corrections: CorrectionTable,
    runs: int,
    seed: int,
    w_max: float,
    verification_mode: str = "exact",
    epsilon: float = DEFAULT_VERIFY_EPSILON,
    shots: int | None = None,
) -> SimulationResult:
    """Monte Carlo trace of the four-step routine, deterministic in the seed.

    Per run: pick a basis uniformly, dephase, sample (announcement,
    outcome) from the exact joint table, correct Bob's conditional state,
    charge the residual bill if it fits the budget (otherwise flag the run
    over-budget and skip the erasure), then verify the final memory.
    """
    bases = {"R": r_basis, "S": s_basis}
    d_b = rho_ab.dims[1]
    reset = np.zeros((d_b, d_b), dtype=complex)
    reset[0, 0] = 1.0

    joints: dict[str, np.ndarray] = {}
    pipeline: dict[str, dict[int, dict]] = {}
    for key, basis in bases.items():
        joint = np.clip(strategy.joint_with(rho_ab, key, basis), 0.0, None)
        joints[key] = joint
        per_symbol = {}
        for k in range(joint.shape[0]):
            corrections.unitary(key, k)  # full-alphabet requirement, fail fast
            p_k = float(joint[k].sum())
            if p_k <= OUTCOME_CUTOFF:
                continue
            cond = joint[k] / p_k
            v = basis.vectors
            sigma = (v * cond) @ dagger(v)
            u = corrections.unitary(key, k)
            tau = u @ sigma @ dagger(u)
            bill = _neg_xlog2x(np.clip(np.real(np.diagonal(tau)), 0.0, None))
            committed = bill <= w_max + 1e-12
            final = reset if committed else tau
            exact = szilard_verify(final, mode="exact", epsilon=epsilon)
            per_symbol[k] = {
                "cond_cum": np.cumsum(cond),
                "bill": bill,
                "committed": committed,
                "final_diag": np.clip(np.real(np.diagonal(final)), 0.0, None),
                "exact": exact,
                "label": corrections.label(key, k),
            }
        pipeline[key] = per_symbol

    flat = {}
    for key, joint in joints.items():
        masked = joint.copy()
        for k in range(joint.shape[0]):
            if k not in pipeline[key]:
                masked[k] = 0.0  # below-cutoff symbols must never be drawn
        flat[key] = (np.cumsum(masked.ravel()), joint.shape)
    basis_keys = ("R", "S")
    records = []
    for r in range(runs):
        rng = _run_rng(seed, r)
        key = basis_keys[int(rng.integers(2))]
        cum, shape = flat[key]
        idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        idx = min(idx, shape[0] * shape[1] - 1)
        k, i = divmod(idx, shape[1])
        entry = pipeline[key][k]
        if verification_mode == "exact":
            work, passed = entry["exact"].extractable_work_bits, entry["exact"].passed
        elif verification_mode == "sampled":
            if shots is None:
                raise ValidationError("sampled verification requires shots")
            diag = entry["final_diag"]
            full = float(np.log2(diag.size))
            work = full - _sampled_plugin_entropy(diag / diag.sum(), int(shots), rng)
            passed = work >= full - epsilon
        else:
            raise ValidationError(f"unknown verification mode {verification_mode!r}")
        records.append(
            ProtocolRunRecord(
                index=r,
                basis=key,
                outcome=i,
                announcement=k,
                correction=entry["label"],
                committed=entry["committed"],
                work_spent=entry["bill"] if entry["committed"] else 0.0,
                extractable_work=float(work),
                passed=bool(passed),
            )
        )

    cond_entropies = {key: conditional_outcome_entropy(j) for key, j in joints.items()}
    observed = 0.5 * sum(cond_entropies.values())
    floor = lhs_floor(r_basis, s_basis)
    certificate = certify_steering(rho_ab, r_basis, s_basis, strategy)
    n = max(len(records), 1)
    summary = ProtocolSummary(
        runs=runs,
        mean_cost_bits=float(sum(rec.work_spent for rec in records)) / n,
        pass_rate=float(sum(rec.passed for rec in records)) / n,
        over_budget_runs=sum(not rec.committed for rec in records),
        per_basis_conditional_entropy=cond_entropies,
        observed_cost_bits=observed,
        floor_bits=floor,
        certificate=certificate,
        w_max=w_max,
        seed=seed,
        verification_mode=verification_mode,
    )
    return SimulationResult(records=tuple(records), summary=summary)


def run_cost_spread(rho_ab, r_basis, s_basis, strategy, corrections, w_max) -> tuple[float, float]:
    """Exact mean and standard deviation of the per-run committed bill.

    Used by convergence tests to form the n^(-1/2) band around the exact
    observed cost without relying on empirical variance.
    """
    bills, weights = [], []
    for key, basis in (("R", r_basis), ("S", s_basis)):
        joint = np.clip(strategy.joint_with(rho_ab, key, basis), 0.0, None)
        for k in range(joint.shape[0]):
            p_k = float(joint[k].sum())
            if p_k <= OUTCOME_CUTOFF:
                continue
            cond = joint[k] / p_k
            v = basis.vectors
            sigma = (v * cond) @ dagger(v)
            u = corrections.unitary(key, k)
            tau = u @ sigma @ dagger(u)
            bill = _neg_xlog2x(np.clip(np.real(np.diagonal(tau)), 0.0, None))
            committed = bill <= w_max + 1e-12
            bills.append(bill if committed else 0.0)
            weights.append(0.5 * p_k)
    bills, weights = np.array(bills), np.array(weights)
    mean = float(weights @ bills)
    var = float(weights @ (bills - mean) ** 2)
    return mean, float(np.sqrt(max(var, 0.0)))
