"""Compression-based erasure ledger and verify-or-revert recoverability.

The asymptotic routine concentrates all entropy of n memory copies into
maximally mixed registers (reversible), irreversibly erases only as many
of those as the work budget allows, and reversibly dilutes the remainder
back into fewer intact copies.  Register counts are carried as reals; the
theorems being modeled are asymptotic, so forcing integers would only
manufacture rounding failures.

Blocks model the per-announcement verification flow: every pre-erasure
operation is a recorded unitary, so a failed verification can undo
everything exactly, while a passed one licenses only the planned erasure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import von_neumann_entropy
from .linalg import ValidationError, dagger, trace_distance
from .states import DensityMatrix

LEDGER_TOL = 1e-9
REVERT_TOL = 1e-12
DEFAULT_EPSILON = 1e-6
MAX_BLOCK_QUBITS = 10


# ---------------------------------------------------------------------------
# asymptotic compression ledger
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompressionPlan:
    """Entropy/work bookkeeping for erasing part of n copies of a known state."""

    n: float
    d: int
    entropy_bits: float  # per-copy entropy S
    work_bits: float  # per-copy work budget W <= S
    pure_registers: float
    noisy_registers: float
    erased_registers: float
    recovered_copies: float
    work_invested: float

    @property
    def recovered_fraction(self) -> float:
        return self.recovered_copies / self.n

    def integer_view(self) -> dict:
        """Floor the register counts, reporting the slack the rounding drops."""
        fields = {
            "pure_registers": self.pure_registers,
            "noisy_registers": self.noisy_registers,
            "erased_registers": self.erased_registers,
            "recovered_copies": self.recovered_copies,
        }
        view = {k: math.floor(v) for k, v in fields.items()}
        view["slack"] = {k: v - math.floor(v) for k, v in fields.items()}
        return view

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "entropy_bits": self.entropy_bits,
            "work_bits": self.work_bits,
            "pure_registers": self.pure_registers,
            "noisy_registers": self.noisy_registers,
            "erased_registers": self.erased_registers,
            "recovered_copies": self.recovered_copies,
            "work_invested": self.work_invested,
            "recovered_fraction": self.recovered_fraction,
        }


def compression_plan(entropy_bits: float, work_bits: float, n: float, d: int) -> CompressionPlan:
    """Ledger for the three-stage routine at per-copy entropy S and budget W.

    Stage counts: n(1 - S/log2 d) registers come out pure, nS/log2 d carry
    the entropy, nW/log2 d of those are erased (costing log2 d each), and
    the rest dilute back into n(1 - W/S) intact copies.
    """
    log_d = math.log2(d)
    if d < 2:
        raise ValidationError(f"local dimension must be >= 2, got {d}")
    if n < 1:
        raise ValidationError(f"copy count must be >= 1, got {n}")
    if not 0.0 <= entropy_bits <= log_d + 1e-12:
        raise ValidationError(
            f"per-copy entropy {entropy_bits!r} outside [0, log2 {d}]"
        )
    if work_bits < 0.0:
        raise ValidationError(f"work budget {work_bits!r} is negative")
    if work_bits > entropy_bits + 1e-12:
        raise ValidationError(
            f"work budget {work_bits!r} exceeds total per-copy entropy {entropy_bits!r}"
        )
    recovered = float(n) if entropy_bits == 0.0 else n * (1.0 - work_bits / entropy_bits)
    erased = n * work_bits / log_d
    return CompressionPlan(
        n=float(n),
        d=int(d),
        entropy_bits=float(entropy_bits),
        work_bits=float(work_bits),
        pure_registers=n * (1.0 - entropy_bits / log_d),
        noisy_registers=n * entropy_bits / log_d,
        erased_registers=erased,
        recovered_copies=recovered,
        work_invested=erased * log_d,  # = n*W up to one rounding
    )


def ledger_check(plan: CompressionPlan) -> bool:
    """Re-verify every conservation rule of a plan; True iff all hold.

    The two conservation identities are checked per copy, so the 1e-9
    tolerance is scale-free in n.
    """
    log_d = math.log2(plan.d)
    n = max(plan.n, 1.0)
    counts = (
        plan.pure_registers,
        plan.noisy_registers,
        plan.erased_registers,
        plan.recovered_copies,
    )
    checks = [
        plan.work_bits <= plan.entropy_bits + 1e-12,
        all(c >= -LEDGER_TOL for c in counts),
        abs(plan.work_invested - plan.erased_registers * log_d) / n <= LEDGER_TOL,
        abs(
            plan.recovered_copies * plan.entropy_bits
            - (plan.noisy_registers - plan.erased_registers) * log_d
        )
        / n
        <= LEDGER_TOL,
    ]
    return all(checks)


# ---------------------------------------------------------------------------
# verify-or-revert block state machine
# ---------------------------------------------------------------------------

_TRANSITIONS = {
    "initial": {"compressed"},
    "compressed": {"verified", "reverted"},
    "verified": {"erased"},
    "reverted": set(),
    "erased": set(),
}


@dataclass
class BlockState:
    """One verification block: either an explicit small state or a ledger entry.

    Explicit blocks carry density matrices (at most 10 qubits) and measure
    their own deviation from the honest target; ledger blocks carry a
    caller-supplied deviation instead.
    """

    label: str = "block"
    basis: str | None = None
    state: DensityMatrix | None = None
    honest: DensityMatrix | None = None
    delta: float | None = None
    phase: str = "initial"
    _initial: DensityMatrix | None = field(default=None, repr=False)
    _compress_u: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.phase not in _TRANSITIONS:
            raise ValidationError(f"unknown block phase {self.phase!r}")
        if self.state is not None:
            if self.honest is None:
                raise ValidationError("explicit blocks need an honest target state")
            if self.state.dim > 2**MAX_BLOCK_QUBITS:
                raise ValidationError(
                    f"explicit block dimension {self.state.dim} exceeds "
                    f"{MAX_BLOCK_QUBITS} qubits; use ledger mode"
                )
            if self.state.dim != self.honest.dim:
                raise ValidationError("block state and honest target dimensions differ")
        elif self.delta is None:
            raise ValidationError("ledger blocks need a deviation value")

    @property
    def is_explicit(self) -> bool:
        return self.state is not None

    def _move(self, new_phase: str):
        if new_phase not in _TRANSITIONS[self.phase]:
            raise ValidationError(
                f"illegal phase transition {self.phase} -> {new_phase}"
            )
        self.phase = new_phase

    def deviation(self) -> float:
        """Trace distance to the honest pattern (unitary stages preserve it)."""
        if self.delta is not None:
            return float(self.delta)
        return trace_distance(self.state, self.honest)

    def compress(self):
        """Reversible concentration stage; the unitary is recorded for revert.

        For explicit blocks the unitary rotates the honest eigenbasis to the
        computational one (entropy sorted to the bottom registers); it is
        derived from the honest target only, never adapted to the attacker.
        """
        if self.is_explicit:
            self._initial = self.state
            vals, vecs = np.linalg.eigh(self.honest.matrix)
            order = np.argsort(vals)[::-1]
            u = dagger(vecs[:, order])
            self._compress_u = u
            self.state = DensityMatrix(u @ self.state.matrix @ dagger(u), self.state.dims)
            self.honest = DensityMatrix(
                u @ self.honest.matrix @ dagger(u), self.honest.dims
            )
        self._move("compressed")

    def verify(self, epsilon: float) -> bool:
        passed = self.deviation() <= epsilon
        self._move("verified" if passed else "reverted")
        if self.phase == "reverted":
            self._revert()
        return passed

    def _revert(self):
        if self.is_explicit:
            u = self._compress_u
            restored = DensityMatrix(
                dagger(u) @ self.state.matrix @ u, self.state.dims
            )
            gap = trace_distance(restored, self._initial)
            if gap > REVERT_TOL:
                raise ValidationError(
                    f"revert failed to restore block {self.label!r}: "
                    f"trace distance {gap:.3e}"
                )
            self.state = restored
            self.honest = DensityMatrix(
                dagger(u) @ self.honest.matrix @ u, self.honest.dims
            )

    def erase(self):
        """Deliberate erasure of the planned noisy fraction (ledger-level)."""
        self._move("erased")
        if self.is_explicit:
            self.state = self.honest


@dataclass(frozen=True)
class BlockOutcome:
    label: str
    basis: str | None
    deviation: float
    passed: bool
    final_phase: str
    restored: bool
    erased_registers: float
    work_invested: float

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "basis": self.basis,
            "deviation": self.deviation,
            "passed": self.passed,
            "final_phase": self.final_phase,
            "restored": self.restored,
            "erased_registers": self.erased_registers,
            "work_invested": self.work_invested,
        }


@dataclass(frozen=True)
class RecoveryReport:
    outcomes: tuple[BlockOutcome, ...]
    plan: CompressionPlan
    epsilon: float

    @property
    def all_accounted(self) -> bool:
        """Every block either passed (honest-equivalent) or was fully restored."""
        return all(o.passed or o.restored for o in self.outcomes)

    @property
    def total_work_invested(self) -> float:
        return sum(o.work_invested for o in self.outcomes)

    def to_json_dict(self) -> dict:
        return {
            "outcomes": [o.to_json_dict() for o in self.outcomes],
            "plan": self.plan.to_json_dict(),
            "epsilon": self.epsilon,
            "all_accounted": self.all_accounted,
            "total_work_invested": self.total_work_invested,
        }


def run_dd_recovery(
    blocks: list[BlockState],
    deviations: list[float | None] | None = None,
    epsilon: float = DEFAULT_EPSILON,
    plan: CompressionPlan | None = None,
) -> RecoveryReport:
    """Compress, verify, then erase-or-revert each block independently.

    `deviations` injects adversarial deviations into ledger blocks (and
    overrides explicit ones when given); blocks left at None measure their
    own trace distance to the honest target.  On a failed verification the
    recorded unitary is inverted and exact restoration is asserted.
    """
    if plan is None:
        plan = compression_plan(1.0, 0.5, 1.0, 2)
    if deviations is None:
        deviations = [None] * len(blocks)
    if len(deviations) != len(blocks):
        raise ValidationError(
            f"{len(deviations)} deviations supplied for {len(blocks)} blocks"
        )
    outcomes = []
    for block, dev in zip(blocks, deviations):
        if dev is not None:
            block.delta = float(dev)
        block.compress()
        dev_val = block.deviation()
        passed = block.verify(epsilon)
        if passed:
            block.erase()
        outcomes.append(
            BlockOutcome(
                label=block.label,
                basis=block.basis,
                deviation=dev_val,
                passed=passed,
                final_phase=block.phase,
                restored=(not passed),
                erased_registers=plan.erased_registers if passed else 0.0,
                work_invested=plan.work_invested if passed else 0.0,
            )
        )
    return RecoveryReport(outcomes=tuple(outcomes), plan=plan, epsilon=epsilon)


@dataclass(frozen=True)
class RecoveryAdversary:
    """Per-basis deviation injections for the blockwise protocol."""

    label: str = "honest"
    r_deviations: tuple[float | None, ...] | None = None
    s_deviations: tuple[float | None, ...] | None = None

    @staticmethod
    def honest() -> "RecoveryAdversary":
        return RecoveryAdversary(label="honest")

    @staticmethod
    def basis_attack(basis: str, delta: float, count: int) -> "RecoveryAdversary":
        devs = tuple([delta] * count)
        if basis == "R":
            return RecoveryAdversary(label=f"attack-R(delta={delta})", r_deviations=devs)
        if basis == "S":
            return RecoveryAdversary(label=f"attack-S(delta={delta})", s_deviations=devs)
        raise ValidationError(f"unknown basis tag {basis!r}")

    @staticmethod
    def lambda_replay() -> "RecoveryAdversary":
        # hidden-variable replay matches the honest statistics exactly, so it
        # induces no deviation on either block (and no exclusivity either)
        return RecoveryAdversary(label="lambda-replay")


@dataclass(frozen=True)
class SdiRecoveryReport:
    r_report: RecoveryReport
    s_report: RecoveryReport
    adversary: str

    @property
    def all_accounted(self) -> bool:
        return self.r_report.all_accounted and self.s_report.all_accounted

    def to_json_dict(self) -> dict:
        return {
            "R": self.r_report.to_json_dict(),
            "S": self.s_report.to_json_dict(),
            "adversary": self.adversary,
            "all_accounted": self.all_accounted,
        }


def run_sdi_recovery(
    r_blocks: list[BlockState],
    s_blocks: list[BlockState],
    adversary: RecoveryAdversary | None = None,
    epsilon: float = DEFAULT_EPSILON,
    plan: CompressionPlan | None = None,
) -> SdiRecoveryReport:
    """Apply the verify-or-revert flow independently to the R- and S-blocks.

    The basis choice is public, so an attack concentrated on one basis
    reverts that block while leaving the other honest-equivalent.
    """
    adversary = adversary or RecoveryAdversary.honest()
    r_devs = list(adversary.r_deviations) if adversary.r_deviations else None
    s_devs = list(adversary.s_deviations) if adversary.s_deviations else None
    return SdiRecoveryReport(
        r_report=run_dd_recovery(r_blocks, r_devs, epsilon, plan),
        s_report=run_dd_recovery(s_blocks, s_devs, epsilon, plan),
        adversary=adversary.label,
    )


def honest_block_entropy(block: BlockState) -> float:
    """Per-copy entropy of a block's honest target (explicit blocks only)."""
    if block.honest is None:
        raise ValidationError("ledger blocks carry no honest state")
    return von_neumann_entropy(block.honest)
