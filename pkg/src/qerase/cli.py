"""Command-line surface: cost, werner-sweep, simulate, certify, recover.

Outputs are deterministic given the invocation (JSON with sorted keys,
fixed float formatting, seeded sampling) and written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import costs, protocol, recovery, werner
from .linalg import ValidationError
from .measurements import ProjectiveBasis
from .states import DensityMatrix, bell_state, load_state, maximally_mixed, werner_state

FORMAT_VERSION = 1

_GATES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
}


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qerase-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: str | None) -> None:
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def resolve_state(spec) -> DensityMatrix:
    if isinstance(spec, str):
        return load_state(spec)
    if not isinstance(spec, dict):
        raise ValidationError(f"cannot interpret state spec {spec!r}")
    if "path" in spec:
        return load_state(spec["path"])
    if "werner" in spec:
        return werner_state(float(spec["werner"]))
    if "bell" in spec:
        return bell_state(str(spec["bell"]))
    if "maximally_mixed" in spec:
        d = int(spec["maximally_mixed"])
        return maximally_mixed(d)
    return DensityMatrix.from_json_dict(spec)


def resolve_basis(spec) -> ProjectiveBasis:
    if isinstance(spec, str):
        name = spec.lower()
        if name == "computational":
            return ProjectiveBasis.computational(2)
        if name == "hadamard":
            return ProjectiveBasis.hadamard()
        if name.startswith("fourier:"):
            return ProjectiveBasis.fourier(int(name.split(":", 1)[1]))
        return ProjectiveBasis.from_json_dict(json.load(open(spec)))
    if isinstance(spec, dict):
        if "path" in spec:
            return ProjectiveBasis.from_json_dict(json.load(open(spec["path"])))
        return ProjectiveBasis.from_json_dict(spec)
    raise ValidationError(f"cannot interpret basis spec {spec!r}")


def gate_matrix(spec) -> np.ndarray:
    if isinstance(spec, str):
        try:
            return _GATES[spec.upper()]
        except KeyError:
            raise ValidationError(f"unknown gate name {spec!r}") from None
    if isinstance(spec, list):
        m = np.eye(2, dtype=complex)
        for name in spec:
            m = m @ gate_matrix(name)
        return m
    if isinstance(spec, dict) and "re" in spec and "im" in spec:
        return np.asarray(spec["re"], dtype=float) + 1j * np.asarray(spec["im"], dtype=float)
    raise ValidationError(f"cannot interpret correction spec {spec!r}")


def build_corrections(spec: dict) -> protocol.CorrectionTable:
    unitaries: dict[str, dict[int, np.ndarray]] = {}
    labels: dict[str, dict[int, str]] = {}
    for basis_label, table in spec.items():
        unitaries[basis_label] = {}
        labels[basis_label] = {}
        for symbol, gate in table.items():
            k = int(symbol)
            unitaries[basis_label][k] = gate_matrix(gate)
            labels[basis_label][k] = gate if isinstance(gate, str) else json.dumps(gate)
    return protocol.CorrectionTable(unitaries=unitaries, labels=labels)


def build_strategy(spec: dict, rho, r_basis, s_basis, cfg) -> protocol.Strategy:
    label = spec.get("label")
    if label is None:
        raise ValidationError("strategy spec is missing required field 'label'")
    if label == "honest-matched":
        return protocol.matched_strategy(r_basis, s_basis)
    if label == "wrong-basis":
        return protocol.wrong_basis_strategy(r_basis, s_basis)
    if label == "optimized":
        return protocol.optimized_strategy(rho, r_basis, s_basis, cfg)
    if label == "constant":
        return protocol.ConstantStrategy(
            symbol=int(spec.get("symbol", 0)), alphabet=int(spec.get("alphabet", 2))
        )
    if label == "uniform-random":
        return protocol.UniformRandomStrategy(alphabet=int(spec.get("alphabet", 2)))
    if label == "lambda-replay":
        model = _resolve_lhs_model(spec, r_basis, s_basis)
        return protocol.lhs_eve_strategy(model)
    if label == "intercept-resend":
        inner = build_strategy(spec["inner"], rho, r_basis, s_basis, cfg)
        return protocol.InterceptResendStrategy(
            inner=inner, channel=np.asarray(spec["channel"], dtype=float)
        )
    raise ValidationError(f"unknown strategy label {label!r}")


def _resolve_lhs_model(spec: dict, r_basis, s_basis) -> protocol.LhsModel:
    from .states import werner_separable_parts

    if "werner_p" in spec:
        parts = werner_separable_parts(float(spec["werner_p"]))
        return protocol.lhs_model_from_separable(*parts, r_basis, s_basis)
    if "model" not in spec:
        raise ValidationError(
            "lambda-replay strategy needs a 'model' or a 'werner_p' field"
        )
    m = spec["model"]
    hidden = tuple(resolve_state(s) for s in m["hidden_states"])
    response = {k: np.asarray(v, dtype=float) for k, v in m["response"].items()}
    return protocol.LhsModel(
        weights=np.asarray(m["weights"], dtype=float),
        hidden_states=hidden,
        response=response,
    )


def optimizer_config(args, seed_override=None) -> costs.OptimizerConfig:
    kwargs = {}
    if getattr(args, "restarts", None):
        kwargs["restarts"] = args.restarts
    if getattr(args, "grid_points", None):
        kwargs["grid_points"] = args.grid_points
    if seed_override is not None:
        kwargs["seed"] = seed_override
    return costs.OptimizerConfig(**kwargs)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_cost(args) -> int:
    rho = load_state(args.state)
    cfg = optimizer_config(args, args.seed)
    if args.party == "E" and rho.dims != (2, 2):
        raise ValidationError(
            f"party=E needs a two-qubit state (concurrence route), got dims {rho.dims}"
        )
    if rho.dims == (2, 2):
        report = costs.exclusivity_dd(rho, cfg, w_max=args.budget)
        payload = report.to_json_dict()
    else:
        if len(rho.dims) != 2:
            raise ValidationError(f"cost needs a bipartite state, got dims {rho.dims}")
        from .entropy import von_neumann_entropy
        from .states import partial_trace

        s_b = von_neumann_entropy(partial_trace(rho, [1]))
        res = costs.assisted_cost(rho, cfg)
        budget = res.bits if args.budget is None else args.budget
        payload = costs.ErasureReport(
            unassisted_bits=s_b,
            assisted_bits=res.bits,
            classical_corr_bits=s_b - res.bits,
            budget_bits=budget,
            exclusive=False,
            reason="adversary cost unavailable for this dimension",
            probes=res.probes,
        ).to_json_dict()
    payload.update({"format_version": FORMAT_VERSION, "command": "cost", "party": args.party})
    emit(json_text(payload), args.out)
    return 0


def cmd_werner_sweep(args) -> int:
    if args.threads and args.threads > 1:
        span = args.p_max - args.p_min
        grid = [args.p_min + span * k / (args.steps - 1) for k in range(args.steps)]
        grid[-1] = args.p_max
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(werner.werner_closed_forms, grid))
    else:
        rows = werner.sweep(args.p_min, args.p_max, args.steps)
    emit(werner.rows_to_csv(rows), args.out)
    return 0


def cmd_simulate(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    for key in ("state", "bases", "strategy", "corrections", "runs", "seed", "w_max"):
        if key not in config:
            raise ValidationError(f"simulation config is missing required field '{key}'")
    rho = resolve_state(config["state"])
    r_basis = resolve_basis(config["bases"]["R"])
    s_basis = resolve_basis(config["bases"]["S"])
    seed = args.seed if args.seed is not None else int(config["seed"])
    cfg = optimizer_config(args)
    strategy = build_strategy(config["strategy"], rho, r_basis, s_basis, cfg)
    corrections = build_corrections(config["corrections"])
    verification = config.get("verification", {})
    result = protocol.simulate_protocol(
        rho,
        r_basis,
        s_basis,
        strategy,
        corrections,
        runs=int(config["runs"]),
        seed=seed,
        w_max=float(config["w_max"]),
        verification_mode=verification.get("mode", "exact"),
        epsilon=float(verification.get("epsilon", protocol.DEFAULT_VERIFY_EPSILON)),
        shots=verification.get("shots"),
    )
    payload = result.summary.to_json_dict()
    payload.update(
        {"format_version": FORMAT_VERSION, "command": "simulate", "strategy": strategy.label}
    )
    emit(json_text(payload), args.out)
    records_path = args.records or config.get("records_csv")
    if records_path:
        atomic_write(records_path, records_csv(result.records))
    return 0


def records_csv(records) -> str:
    lines = ["run,basis,outcome,announcement,correction,committed,work_spent,extractable_work,passed"]
    for r in records:
        lines.append(
            f"{r.index},{r.basis},{r.outcome},{r.announcement},{r.correction},"
            f"{int(r.committed)},{r.work_spent:.12g},{r.extractable_work:.12g},{int(r.passed)}"
        )
    return "\n".join(lines) + "\n"


def cmd_certify(args) -> int:
    rho = load_state(args.state)
    r_basis = resolve_basis(args.basis_r)
    s_basis = resolve_basis(args.basis_s)
    cfg = optimizer_config(args, args.seed)
    strategy = build_strategy({"label": args.strategy}, rho, r_basis, s_basis, cfg)
    certificate = protocol.certify_steering(rho, r_basis, s_basis, strategy)
    payload = certificate.to_json_dict()
    payload.update(
        {"format_version": FORMAT_VERSION, "command": "certify", "strategy": strategy.label}
    )
    emit(json_text(payload), args.out)
    return 0


def cmd_recover(args) -> int:
    with open(args.scenario) as fh:
        scenario = json.load(fh)
    for key in ("plan", "blocks"):
        if key not in scenario:
            raise ValidationError(f"recovery scenario is missing required field '{key}'")
    plan_spec = scenario["plan"]
    plan = recovery.compression_plan(
        entropy_bits=float(plan_spec["entropy_bits"]),
        work_bits=float(plan_spec["work_bits"]),
        n=float(plan_spec["n"]),
        d=int(plan_spec["d"]),
    )
    epsilon = float(scenario.get("epsilon", recovery.DEFAULT_EPSILON))
    blocks = [_build_block(spec, i) for i, spec in enumerate(scenario["blocks"])]
    tagged = [b for b in blocks if b.basis is not None]
    if tagged and len(tagged) != len(blocks):
        raise ValidationError("blocks must be all basis-tagged or all untagged")
    if tagged:
        r_blocks = [b for b in blocks if b.basis == "R"]
        s_blocks = [b for b in blocks if b.basis == "S"]
        adversary = recovery.RecoveryAdversary(
            label=scenario.get("adversary", {}).get("label", "scenario")
        )
        report = recovery.run_sdi_recovery(r_blocks, s_blocks, adversary, epsilon, plan)
    else:
        report = recovery.run_dd_recovery(blocks, None, epsilon, plan)
    payload = report.to_json_dict()
    payload.update({"format_version": FORMAT_VERSION, "command": "recover"})
    emit(json_text(payload), args.out)
    return 0


def _build_block(spec: dict, index: int) -> recovery.BlockState:
    state = resolve_state(spec["state"]) if spec.get("state") else None
    honest = resolve_state(spec["honest"]) if spec.get("honest") else None
    return recovery.BlockState(
        label=spec.get("label", f"block{index}"),
        basis=spec.get("basis"),
        state=state,
        honest=honest,
        delta=spec.get("delta"),
    )


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common_flags(sub):
    sub.add_argument("--out", help="write output to this path (default: stdout)")
    sub.add_argument("--seed", type=int, help="override any configured seed")
    sub.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    sub.add_argument("--restarts", type=int, help="optimizer restarts")
    sub.add_argument("--grid-points", dest="grid_points", type=int, help="optimizer grid resolution")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qerase",
        description="Assisted-erasure work costs, exclusivity certificates, "
        "protocol simulation, and recoverability ledgers.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("cost", help="erasure costs and exclusivity for a state file")
    p.add_argument("state", help="state JSON file (dims/re/im)")
    p.add_argument("--party", choices=["A", "E"], default="A")
    p.add_argument("--budget", type=float, help="per-run work cap in bits")
    _common_flags(p)
    p.set_defaults(fn=cmd_cost)

    p = subs.add_parser("werner-sweep", help="closed-form sweep CSV over the Werner family")
    p.add_argument("p_min", type=float)
    p.add_argument("p_max", type=float)
    p.add_argument("steps", type=int)
    _common_flags(p)
    p.set_defaults(fn=cmd_werner_sweep)

    p = subs.add_parser("simulate", help="Monte Carlo run of the dephasing protocol")
    p.add_argument("config", help="protocol config JSON")
    p.add_argument("--records", help="also write per-run records CSV here")
    _common_flags(p)
    p.set_defaults(fn=cmd_simulate)

    p = subs.add_parser("certify", help="steering certificate from observed costs")
    p.add_argument("state", help="state JSON file")
    p.add_argument("--basis-r", dest="basis_r", default="computational")
    p.add_argument("--basis-s", dest="basis_s", default="hadamard")
    p.add_argument(
        "--strategy",
        default="honest-matched",
        choices=["honest-matched", "optimized", "wrong-basis", "uniform-random", "constant"],
    )
    _common_flags(p)
    p.set_defaults(fn=cmd_certify)

    p = subs.add_parser("recover", help="verify-or-revert recovery scenario")
    p.add_argument("scenario", help="scenario JSON file")
    _common_flags(p)
    p.set_defaults(fn=cmd_recover)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
