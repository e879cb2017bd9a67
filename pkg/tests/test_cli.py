"""End-to-end command-line behavior: outputs, determinism, error paths."""

import json

import numpy as np
import pytest

from qerase.cli import main
from qerase.states import bell_state, save_state, werner_state


@pytest.fixture
def bell_file(tmp_path):
    path = tmp_path / "bell.json"
    save_state(bell_state("phi_plus"), path)
    return str(path)


def werner_file(tmp_path, p):
    path = tmp_path / f"werner_{p}.json"
    save_state(werner_state(p), path)
    return str(path)


def simulate_config(tmp_path, state, strategy, runs=2000, seed=9, w_max=0.0, **extra):
    config = {
        "format_version": 1,
        "state": state,
        "bases": {"R": "computational", "S": "hadamard"},
        "strategy": strategy,
        "corrections": {
            "R": {"0": "I", "1": "X"},
            "S": {"0": "H", "1": ["H", "Z"]},
        },
        "runs": runs,
        "seed": seed,
        "w_max": w_max,
    }
    config.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return str(path)


class TestCostCommand:
    def test_bell_party_a(self, bell_file, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["cost", bell_file, "--party", "A", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["assisted_bits"] <= 1e-8
        assert report["format_version"] == 1

    def test_werner_party_e(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["cost", werner_file(tmp_path, 0.6), "--party", "E", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert abs(report["adversary_bits"] - 0.2502249116) < 1e-6
        assert abs(report["entanglement_of_formation_bits"] - report["adversary_bits"]) < 1e-15

    def test_budget_below_assisted_cost(self, tmp_path):
        out = tmp_path / "report.json"
        main(["cost", werner_file(tmp_path, 0.6), "--budget", "0.1", "--out", str(out)])
        report = json.loads(out.read_text())
        assert report["exclusive"] is False
        assert report["reason"] == "cap below assisted cost"

    def test_malformed_state_names_invariant(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"dims": [2], "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]}))
        assert main(["cost", str(bad)]) == 2
        assert "trace" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["cost", str(tmp_path / "nope.json")]) == 2

    def test_party_e_needs_two_qubits(self, tmp_path, capsys):
        from qerase.states import maximally_mixed, save_state

        path = tmp_path / "qutrit.json"
        save_state(maximally_mixed(3), path)
        assert main(["cost", str(path), "--party", "E"]) == 2
        assert "two-qubit" in capsys.readouterr().err

    def test_party_a_works_beyond_two_qubits(self, tmp_path):
        from qerase.states import maximally_mixed, save_state, tensor

        path = tmp_path / "qubit_qutrit.json"
        save_state(tensor(maximally_mixed(2), maximally_mixed(3)), path)
        out = tmp_path / "report.json"
        assert main(["cost", str(path), "--party", "A", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert abs(report["unassisted_bits"] - np.log2(3)) < 1e-9
        assert abs(report["assisted_bits"] - np.log2(3)) < 1e-6
        assert report["adversary_bits"] is None

    def test_deterministic_output(self, bell_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["cost", bell_file, "--out", str(a)])
        main(["cost", bell_file, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestWernerSweepCommand:
    def test_writes_header_and_rows(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["werner-sweep", "0", "1", "101", "--out", str(out)]) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 102
        assert lines[0] == (
            "p,W_A,W_E_dd,lhs_floor,entangled,steerable,nonlocal,dd_exclusive,sdi_witness"
        )

    def test_idempotent_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["werner-sweep", "0", "1", "51", "--out", str(a)])
        main(["werner-sweep", "0", "1", "51", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_two_steps_endpoints(self, tmp_path):
        out = tmp_path / "two.csv"
        main(["werner-sweep", "0", "1", "2", "--out", str(out)])
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 3
        assert lines[1].startswith("0,") and lines[2].startswith("1,")

    def test_threads_flag_matches_serial(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["werner-sweep", "0", "1", "31", "--out", str(a)])
        main(["werner-sweep", "0", "1", "31", "--out", str(b), "--threads", "4"])
        assert a.read_bytes() == b.read_bytes()

    def test_stdout(self, capsys):
        assert main(["werner-sweep", "0", "1", "2"]) == 0
        assert capsys.readouterr().out.startswith("p,W_A")


class TestSimulateCommand:
    def test_bell_honest(self, tmp_path):
        cfg = simulate_config(tmp_path, {"bell": "phi_plus"}, {"label": "honest-matched"})
        out = tmp_path / "summary.json"
        assert main(["simulate", cfg, "--out", str(out)]) == 0
        summary = json.loads(out.read_text())
        assert summary["pass_rate"] == 1.0
        assert abs(summary["mean_cost_bits"]) < 1e-12

    def test_bell_wrong_basis(self, tmp_path):
        cfg = simulate_config(tmp_path, {"bell": "phi_plus"}, {"label": "wrong-basis"})
        out = tmp_path / "summary.json"
        main(["simulate", cfg, "--out", str(out)])
        summary = json.loads(out.read_text())
        assert summary["pass_rate"] == 0.0

    def test_werner_09_certificate_fires(self, tmp_path):
        cfg = simulate_config(
            tmp_path, {"werner": 0.9}, {"label": "honest-matched"}, w_max=1.0
        )
        out = tmp_path / "summary.json"
        main(["simulate", cfg, "--out", str(out)])
        summary = json.loads(out.read_text())
        assert summary["certificate"]["fired"] is True

    def test_records_csv(self, tmp_path):
        records = tmp_path / "records.csv"
        cfg = simulate_config(
            tmp_path, {"bell": "phi_plus"}, {"label": "honest-matched"},
            runs=50, records_csv=str(records),
        )
        main(["simulate", cfg])
        lines = records.read_text().strip().split("\n")
        assert len(lines) == 51
        assert lines[0] == (
            "run,basis,outcome,announcement,correction,committed,"
            "work_spent,extractable_work,passed"
        )

    def test_missing_correction_names_symbol(self, tmp_path, capsys):
        config = json.loads(open(simulate_config(tmp_path, {"bell": "phi_plus"},
                                                 {"label": "honest-matched"})).read())
        del config["corrections"]["R"]["1"]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(config))
        assert main(["simulate", str(path)]) == 2
        err = capsys.readouterr().err
        assert "announcement 1" in err and "'R'" in err

    def test_missing_field_rejected(self, tmp_path, capsys):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"state": {"bell": "phi_plus"}}))
        assert main(["simulate", str(path)]) == 2
        assert "missing required field" in capsys.readouterr().err

    def test_seed_flag_overrides(self, tmp_path):
        cfg = simulate_config(tmp_path, {"werner": 0.7}, {"label": "honest-matched"},
                              runs=200, w_max=1.0)
        a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
        main(["simulate", cfg, "--out", str(a)])
        main(["simulate", cfg, "--out", str(b), "--seed", "123"])
        main(["simulate", cfg, "--out", str(c), "--seed", "123"])
        assert b.read_bytes() == c.read_bytes()
        assert json.loads(a.read_text())["seed"] != json.loads(b.read_text())["seed"]

    def test_sampled_verification_mode(self, tmp_path):
        cfg = simulate_config(
            tmp_path, {"bell": "phi_plus"}, {"label": "honest-matched"},
            runs=300, verification={"mode": "sampled", "shots": 64, "epsilon": 0.05},
        )
        out = tmp_path / "summary.json"
        assert main(["simulate", cfg, "--out", str(out)]) == 0
        summary = json.loads(out.read_text())
        assert summary["verification_mode"] == "sampled"
        assert summary["pass_rate"] == 1.0

    def test_lambda_replay_strategy(self, tmp_path):
        cfg = simulate_config(
            tmp_path, {"werner": 0.3},
            {"label": "lambda-replay", "werner_p": 0.3},
            runs=200, w_max=1.0,
        )
        out = tmp_path / "summary.json"
        assert main(["simulate", cfg, "--out", str(out)]) == 0
        summary = json.loads(out.read_text())
        assert summary["certificate"]["fired"] is False


class TestCertifyCommand:
    def test_werner_09_fires(self, tmp_path):
        out = tmp_path / "cert.json"
        assert main(["certify", werner_file(tmp_path, 0.9), "--out", str(out)]) == 0
        cert = json.loads(out.read_text())
        assert cert["fired"] is True
        assert abs(cert["floor_bits"] - 0.5) < 1e-9

    def test_werner_03_does_not_fire(self, tmp_path):
        out = tmp_path / "cert.json"
        main(["certify", werner_file(tmp_path, 0.3), "--out", str(out)])
        assert json.loads(out.read_text())["fired"] is False

    def test_optimized_strategy_and_named_bases(self, tmp_path):
        out = tmp_path / "cert.json"
        rc = main(
            [
                "certify", werner_file(tmp_path, 0.9),
                "--strategy", "optimized",
                "--basis-r", "computational", "--basis-s", "fourier:2",
                "--restarts", "3", "--grid-points", "18",
                "--out", str(out),
            ]
        )
        assert rc == 0
        cert = json.loads(out.read_text())
        assert cert["fired"] is True
        assert cert["strategy"] == "optimized"


class TestRecoverCommand:
    def scenario(self, tmp_path, blocks, **extra):
        data = {
            "format_version": 1,
            "epsilon": 1e-6,
            "plan": {"n": 100, "d": 2, "entropy_bits": 1.0, "work_bits": 0.5},
            "blocks": blocks,
        }
        data.update(extra)
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(data))
        return str(path)

    def test_honest_scenario(self, tmp_path):
        path = self.scenario(
            tmp_path,
            [{"label": "b0", "delta": 0.0}, {"label": "b1", "delta": 0.0}],
        )
        out = tmp_path / "report.json"
        assert main(["recover", path, "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["all_accounted"] is True
        assert all(o["passed"] for o in report["outcomes"])

    def test_sdi_attack_on_s(self, tmp_path):
        path = self.scenario(
            tmp_path,
            [
                {"label": "r0", "basis": "R", "delta": 0.0},
                {"label": "s0", "basis": "S", "delta": 1.0},
            ],
            adversary={"label": "attack-S"},
        )
        out = tmp_path / "report.json"
        main(["recover", path, "--out", str(out)])
        report = json.loads(out.read_text())
        assert report["R"]["outcomes"][0]["passed"] is True
        assert report["S"]["outcomes"][0]["passed"] is False
        assert report["all_accounted"] is True

    def test_explicit_block_scenario(self, tmp_path):
        state = werner_state(0.2).to_json_dict()
        path = self.scenario(
            tmp_path, [{"label": "x", "state": state, "honest": state}]
        )
        out = tmp_path / "report.json"
        assert main(["recover", path, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["outcomes"][0]["passed"] is True

    def test_mixed_tagging_rejected(self, tmp_path, capsys):
        path = self.scenario(
            tmp_path,
            [{"label": "a", "basis": "R", "delta": 0.0}, {"label": "b", "delta": 0.0}],
        )
        assert main(["recover", path]) == 2
        assert "basis-tagged" in capsys.readouterr().err

    def test_invalid_plan_rejected(self, tmp_path, capsys):
        path = self.scenario(tmp_path, [{"label": "a", "delta": 0.0}])
        data = json.loads(open(path).read())
        data["plan"]["work_bits"] = 2.0
        open(path, "w").write(json.dumps(data))
        assert main(["recover", path]) == 2
        assert "exceeds" in capsys.readouterr().err
