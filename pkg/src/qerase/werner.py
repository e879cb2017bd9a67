"""Closed forms, thresholds, and sweeps for the singlet-fraction (Werner) family.

All quantities have analytic expressions here: the helper's cost is the
binary entropy of the Pauli error probability, the adversary's
device-dependent cost is the entanglement of formation from the
concurrence kink at p = 1/3, and the semi-device-independent floor for two
mutually unbiased dephasings is 1/2 bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .entropy import binary_entropy
from .linalg import ValidationError

LHS_FLOOR_MUB = 0.5
ENTANGLED_THRESHOLD = 1.0 / 3.0
STEERABLE_THRESHOLD = 0.5
NONLOCAL_THRESHOLD = 1.0 / math.sqrt(2.0)
IDENTITY_TOL = 1e-10
BISECTION_TOL = 1e-10

CSV_HEADER = "p,W_A,W_E_dd,lhs_floor,entangled,steerable,nonlocal,dd_exclusive,sdi_witness"


def assisted_cost_closed_form(p: float) -> float:
    """Helper's cost h2((1-p)/2): the Pauli-basis error rate's binary entropy."""
    return binary_entropy((1.0 - p) / 2.0)


def concurrence_closed_form(p: float) -> float:
    return max(0.0, (3.0 * p - 1.0) / 2.0)


def adversary_cost_closed_form(p: float) -> float:
    """Adversary's device-dependent cost: the entanglement of formation."""
    c = concurrence_closed_form(p)
    return binary_entropy((1.0 + math.sqrt(max(1.0 - c * c, 0.0))) / 2.0)


def _xlog2(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log2(x)


def _joint_entropy_closed_form(p: float) -> float:
    # spectrum (1+3p)/4 once and (1-p)/4 three times
    return -_xlog2((1.0 + 3.0 * p) / 4.0) - 3.0 * _xlog2((1.0 - p) / 4.0)


def _discord_closed_form(p: float) -> float:
    return (
        0.25 * (1.0 - p) * (math.log2(1.0 - p) if p < 1.0 else 0.0)
        - 0.5 * (1.0 + p) * math.log2(1.0 + p)
        + 0.25 * (1.0 + 3.0 * p) * math.log2(1.0 + 3.0 * p)
    )


@dataclass(frozen=True)
class WernerRow:
    """One sweep row; field names mirror the CSV schema."""

    p: float
    W_A: float
    W_E_dd: float
    lhs_floor: float
    entangled: bool
    steerable: bool
    nonlocal_: bool
    dd_exclusive: bool
    sdi_witness: bool

    def csv_values(self) -> list[str]:
        floats = (self.p, self.W_A, self.W_E_dd, self.lhs_floor)
        flags = (
            self.entangled,
            self.steerable,
            self.nonlocal_,
            self.dd_exclusive,
            self.sdi_witness,
        )
        return [f"{x:.12g}" for x in floats] + [str(int(f)) for f in flags]


def werner_closed_forms(p: float) -> WernerRow:
    """Evaluate every column at one mixing parameter.

    Also cross-checks the helper cost against the entropy-plus-discord
    route S(AB) + D(B|A) - 1, which must agree to 1e-10; a violation means
    the closed forms themselves are corrupted.
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"Werner parameter {p!r} outside [0, 1]")
    w_a = assisted_cost_closed_form(p)
    w_e = adversary_cost_closed_form(p)
    discord_route = _joint_entropy_closed_form(p) + _discord_closed_form(p) - 1.0
    if abs(discord_route - w_a) > IDENTITY_TOL:
        raise ValidationError(
            f"discord-route identity violated at p={p!r}: "
            f"{discord_route!r} vs {w_a!r}"
        )
    return WernerRow(
        p=p,
        W_A=w_a,
        W_E_dd=w_e,
        lhs_floor=LHS_FLOOR_MUB,
        entangled=p > ENTANGLED_THRESHOLD,
        steerable=p > STEERABLE_THRESHOLD,
        nonlocal_=p > NONLOCAL_THRESHOLD,
        dd_exclusive=w_a < w_e,
        sdi_witness=w_a < LHS_FLOOR_MUB,
    )


def sweep(p_min: float = 0.0, p_max: float = 1.0, steps: int = 101) -> list[WernerRow]:
    """Uniform inclusive grid of rows, ordered by p."""
    if not (0.0 <= p_min < p_max <= 1.0):
        raise ValidationError(f"degenerate sweep range [{p_min!r}, {p_max!r}]")
    if steps < 2:
        raise ValidationError(f"sweep needs at least 2 steps, got {steps}")
    span = p_max - p_min
    grid = [p_min + span * k / (steps - 1) for k in range(steps)]
    grid[-1] = p_max
    return [werner_closed_forms(p) for p in grid]


def rows_to_csv(rows: list[WernerRow]) -> str:
    lines = [CSV_HEADER]
    lines += [",".join(row.csv_values()) for row in rows]
    return "\n".join(lines) + "\n"


def _bisect(fn, lo: float, hi: float, tol: float = BISECTION_TOL) -> float:
    """Root of a monotone-decreasing function by plain bisection."""
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo < 0.0 or f_hi > 0.0:
        raise ValidationError("bisection bracket does not straddle a sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class Crossings(NamedTuple):
    dd: float
    sdi: float


def crossings() -> Crossings:
    """Onset parameters of exclusive control.

    `sdi` solves h2((1-p)/2) = 1/2 (helper cost meets the MUB floor);
    `dd` solves h2((1-p)/2) = E_f(p) on (1/3, 1) (helper cost meets the
    adversary's).  Both by bisection on analytically monotone differences.
    """
    p_sdi = _bisect(lambda p: assisted_cost_closed_form(p) - LHS_FLOOR_MUB, 0.0, 1.0)
    p_dd = _bisect(
        lambda p: assisted_cost_closed_form(p) - adversary_cost_closed_form(p),
        ENTANGLED_THRESHOLD + 1e-12,
        1.0,
    )
    return Crossings(dd=p_dd, sdi=p_sdi)
