import json
import subprocess
import sys

import numpy as np

from nptcert import jsonio
from nptcert.cli import dispatch
from nptcert.qstate import DimsSpec, make_pure

BELL = {"dims": [2, 2], "amplitudes": [[0.7071067811865475, 0.0], [0, 0], [0, 0], [0.7071067811865475, 0.0]]}


def write(path, obj):
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def read_stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestClassify:
    def test_bell_state_file(self, tmp_path, capsys):
        state = write(tmp_path / "bell.json", BELL)
        assert dispatch(["classify", "--state", state]) == 0
        report = read_stdout_json(capsys)
        assert report["label"] == "NPT"
        assert abs(report["min_eigenvalue"] + 0.5) < 1e-12

    def test_density_file(self, tmp_path, capsys):
        from nptcert.qstate import horodecki

        path = write(tmp_path / "h.json", jsonio.density_to_dict(horodecki(4.5)))
        assert dispatch(["classify", "--state", path]) == 0
        assert read_stdout_json(capsys)["label"] == "NPT"

    def test_mixture_file(self, tmp_path, capsys):
        from nptcert.qstate import example1_mixture

        path = write(tmp_path / "m.json", jsonio.mixture_to_dict(example1_mixture()))
        assert dispatch(["classify", "--state", path]) == 0
        assert read_stdout_json(capsys)["label"] == "PPT"

    def test_partition_flag(self, tmp_path, capsys):
        dims = DimsSpec((2, 2, 2))
        amps = np.zeros(8)
        amps[0] = amps[7] = 1 / np.sqrt(2)
        path = write(tmp_path / "ghz.json", jsonio.state_to_dict(make_pure(amps, dims)))
        assert dispatch(["classify", "--state", path, "--partition", "0,2"]) == 0
        report = read_stdout_json(capsys)
        assert report["partition"] == [0, 2]
        assert report["label"] == "NPT"

    def test_out_file(self, tmp_path, capsys):
        state = write(tmp_path / "bell.json", BELL)
        out = tmp_path / "report.json"
        assert dispatch(["classify", "--state", state, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["label"] == "NPT"

    def test_missing_file(self, tmp_path, capsys):
        assert dispatch(["classify", "--state", str(tmp_path / "nope.json")]) == 2
        assert "error" in capsys.readouterr().err

    def test_invalid_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        assert dispatch(["classify", "--state", str(bad)]) == 2
        assert str(bad) in capsys.readouterr().err

    def test_malformed_field(self, tmp_path, capsys):
        bad = write(tmp_path / "bad.json", {"dims": [2, 2], "amplitudes": [[1.0]]})
        assert dispatch(["classify", "--state", bad]) == 2
        err = capsys.readouterr().err
        assert "amplitudes" in err and str(bad) in err


class TestWitness:
    def test_sampled_mixture_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "mix.json"
        assert (
            dispatch(
                ["sample", "mixture", "--dims", "3,3", "--n", "3", "--k", "2", "--seed", "5", "--out", str(out)]
            )
            == 0
        )
        assert dispatch(["witness", "--mixture", str(out)]) == 0
        cert = read_stdout_json(capsys)
        assert cert["decided_by"] == "witness"
        assert cert["quad_value"] < -1e-10

    def test_ppt_mixture_reports_spectrum_path(self, tmp_path, capsys):
        from nptcert.qstate import example1_mixture

        path = write(tmp_path / "m.json", jsonio.mixture_to_dict(example1_mixture()))
        assert dispatch(["witness", "--mixture", str(path)]) == 0
        out = read_stdout_json(capsys)
        assert out["decided_by"] == "spectrum"
        assert out["label"] == "PPT"


class TestExample1:
    def test_runs_clean(self, capsys):
        assert dispatch(["example1"]) == 0
        report = read_stdout_json(capsys)
        assert report["label"] == "PPT"
        assert 1e-5 <= report["min_eigenvalue"] <= 1e-4


class TestSweep:
    def test_csv_written(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = dispatch(
            ["sweep", "--alpha-min", "3.5", "--alpha-max", "4.5", "--steps", "11", "--out", str(out)]
        )
        assert code == 0
        data = out.read_bytes()
        assert data.startswith(b"alpha,min_eig,label\n")
        assert b"\r" not in data
        assert len(data.decode().strip().split("\n")) == 12
        summary = read_stdout_json(capsys)
        assert abs(summary["alpha_star"] - 4.0) < 1e-4

    def test_bad_range(self, capsys):
        assert dispatch(["sweep", "--alpha-min", "1.0", "--alpha-max", "9.0", "--steps", "5", "--out", "x.csv"]) == 2


class TestVerify:
    def test_small_campaign(self, tmp_path, capsys):
        out = tmp_path / "summary.json"
        code = dispatch(
            [
                "verify", "--theorem", "2", "--dims", "3,3", "--n", "3", "--k", "2",
                "--trials", "100", "--seed", "7", "--out", str(out),
            ]
        )
        assert code == 0
        summary = json.loads(out.read_text())
        assert summary["passed"] == summary["total"] == 100
        assert "wall_time" not in summary

    def test_exit_one_on_failures(self, monkeypatch, capsys):
        from nptcert import cli, harness
        from nptcert.qstate import DimsSpec

        cfg = harness.TrialConfig("2", DimsSpec((3, 3)), 3, 2, 1, 0)
        fake = harness.TrialSummary(cfg, 1, 0, 1, (harness.TrialFailure(0, -1.0, False),), 0.1, "x")
        monkeypatch.setattr(cli.harness, "run_trials", lambda _cfg: fake)
        code = dispatch(
            ["verify", "--theorem", "2", "--dims", "3,3", "--n", "3", "--k", "2", "--trials", "1"]
        )
        assert code == 1

    def test_bad_bound_is_usage_error(self, capsys):
        code = dispatch(
            ["verify", "--theorem", "2", "--dims", "3,3", "--n", "3", "--k", "9", "--trials", "5"]
        )
        assert code == 2


class TestScanOpen:
    def test_small_scan(self, tmp_path, capsys):
        out = tmp_path / "scan.json"
        code = dispatch(
            ["scan-open", "--n", "2", "--dims", "2,2", "--trials", "50", "--seed", "3", "--out", str(out)]
        )
        assert code == 0
        scan = json.loads(out.read_text())
        assert scan["k"] == 1
        assert scan["counterexamples"] == 0


class TestSample:
    def test_pure_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "pure.json"
        assert dispatch(["sample", "pure", "--dims", "2,2", "--seed", "1", "--out", str(out)]) == 0
        assert dispatch(["classify", "--state", str(out)]) == 0
        assert read_stdout_json(capsys)["label"] in ("PPT", "NPT")

    def test_pure_with_rank(self, tmp_path, capsys):
        out = tmp_path / "pure.json"
        assert dispatch(["sample", "pure", "--dims", "3,3", "--n", "2", "--seed", "2", "--out", str(out)]) == 0
        psi = jsonio.load_state_or_density(str(out))
        from nptcert.qstate import Bipartition, schmidt_number

        assert schmidt_number(psi, Bipartition(psi.dims, (0,))) == 2

    def test_product_is_ppt(self, tmp_path, capsys):
        out = tmp_path / "prod.json"
        assert dispatch(["sample", "product", "--dims", "3,3", "--seed", "4", "--out", str(out)]) == 0
        assert dispatch(["classify", "--state", str(out)]) == 0
        assert read_stdout_json(capsys)["label"] == "PPT"

    def test_stdout_when_no_out(self, capsys):
        assert dispatch(["sample", "pure", "--dims", "2,2", "--seed", "1"]) == 0
        obj = read_stdout_json(capsys)
        assert obj["dims"] == [2, 2]

    def test_infeasible_rank(self, capsys):
        assert dispatch(["sample", "pure", "--dims", "2,2", "--n", "3", "--seed", "0"]) == 2


class TestUsage:
    def test_no_command(self, capsys):
        assert dispatch([]) == 2

    def test_unknown_command(self, capsys):
        assert dispatch(["frobnicate"]) == 2

    def test_missing_required(self, capsys):
        assert dispatch(["classify"]) == 2

    def test_negative_seed(self, capsys):
        assert dispatch(["sample", "pure", "--dims", "2,2", "--seed", "-4"]) == 2


class TestDeterminism:
    def test_verify_byte_identical(self, tmp_path):
        args = [
            "verify", "--theorem", "1", "--dims", "2,2", "--n", "2", "--k", "1",
            "--trials", "10", "--seed", "21",
        ]
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert dispatch(args + ["--out", str(out1)]) == 0
        assert dispatch(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_module_entrypoint(self, tmp_path):
        # Exercise the installed entry point end to end in a subprocess.
        out = tmp_path / "r.json"
        proc = subprocess.run(
            [sys.executable, "-m", "nptcert", "example1", "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert json.loads(out.read_text())["label"] == "PPT"
