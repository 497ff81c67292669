"""Experiment registry, reports, determinism and the command line."""

import json

import pytest

from gagliardo.cli import main, parse_object, read_config
from gagliardo.experiments import (MONOTONICITY_LOG, REGISTRY, ExperimentSpec, classify_ladder, list_experiments,
                                   run, run_experiment)

NAMES = {"kernel-audit", "uniform-square-ratio", "const-kernel-blowup", "hilbert-kernel-blowup", "strip-1d",
         "strip-kl", "zero-order-log", "whitney-lemmas"}


class TestRegistry:
    def test_names(self):
        listing = list_experiments()
        assert "strip-kl" in listing and set(listing) == NAMES

    def test_anchors_nonempty(self):
        assert all(entry["anchor"].strip() for entry in list_experiments().values())

    def test_gamma_rule(self):
        schema = list_experiments()["const-kernel-blowup"]["params"]
        assert "1/2" in schema["gammas"]["rule"]
        with pytest.raises(ValueError):
            ExperimentSpec("const-kernel-blowup", {"gammas": "0.25,0.5"}).resolved()

    def test_unknown(self):
        with pytest.raises(KeyError):
            ExperimentSpec("nope").resolved()
        with pytest.raises(ValueError):
            ExperimentSpec("const-kernel-blowup", {"bogus": "1"}).resolved()

    def test_describe_lists_columns(self):
        text = REGISTRY["strip-kl"].describe()
        for col in REGISTRY["strip-kl"].columns:
            assert col in text


class TestClassify:
    def test_bounded(self):
        assert classify_ladder([1.0, 1.5, 1.9]) == "bounded"

    def test_growing(self):
        assert classify_ladder([1.0, 2.0, 3.5]) == "growing"

    def test_unclear(self):
        assert classify_ladder([1.0, 3.0, 2.5]) == "unclear"
        assert classify_ladder([1.0, float("nan")]) == "unclear"


class TestReports:
    def test_const_kernel_closed_forms(self):
        rep = run("const-kernel-blowup", quadrature=False)
        assert rep.verdict
        ratio_sq = rep.column("ratio_sq")
        assert ratio_sq[-1] / ratio_sq[0] >= 9

    def test_deterministic_csv(self):
        a = run("hilbert-kernel-blowup", ns="4,16").to_csv()
        b = run("hilbert-kernel-blowup", ns="4,16").to_csv()
        assert a == b

    def test_config_hash_tracks_params(self):
        a = ExperimentSpec("hilbert-kernel-blowup", {"ns": "4,16"}).config_hash()
        b = ExperimentSpec("hilbert-kernel-blowup", {"ns": [4, 16]}).config_hash()
        c = ExperimentSpec("hilbert-kernel-blowup", {"ns": "4,32"}).config_hash()
        assert a == b != c

    def test_monotonicity_logged(self):
        before = len(MONOTONICITY_LOG)
        rep = run("hilbert-kernel-blowup", ns="4,16")
        assert rep.monotone is True
        assert MONOTONICITY_LOG[before:] == [("hilbert-kernel-blowup", True)]

    def test_zero_order_forward_and_series_checks(self):
        # the cosine-integral checks of this experiment are covered by the acceptance suite
        rep = run("zero-order-log")
        for name in ("forward_ratio_bounded", "log_sum_cauchy", "log_squared_sum_diverges"):
            assert rep.checks[name], name
        assert rep.monotone is True

    def test_json_and_file(self, tmp_path):
        out = tmp_path / "r.json"
        rep = run_experiment(ExperimentSpec("const-kernel-blowup", {"quadrature": "false"}, 0, str(out), "json"))
        data = json.loads(out.read_text())
        assert data["verdict"] == "pass" and data["provenance"]["config_hash"] == rep.config_hash
        assert len(data["rows"]) == 3


class TestCli:
    def test_parse_object(self):
        assert parse_object("bump:center=0.5,0.5:width=0.2") == ("bump", {"center": (0.5, 0.5), "width": 0.2})

    def test_read_config(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("# comment\nseed = 3\nns=4,16  # ladder\n\n")
        assert read_config(p) == {"seed": "3", "ns": "4,16"}

    def test_list(self, capsys):
        assert main(["list"]) == 0
        assert "strip-kl" in json.loads(capsys.readouterr().out)

    def test_pass_exit_code(self, capsys):
        assert main(["experiment", "const-kernel-blowup", "--param", "quadrature=false"]) == 0
        out = capsys.readouterr()
        assert out.out.startswith("gamma,") and "PASS" in out.err

    def test_fail_exit_code(self, capsys):
        code = main(["experiment", "const-kernel-blowup", "--param", "quadrature=false",
                     "--param", "gammas=0.1,0.12"])
        assert code == 2 and "FAIL" in capsys.readouterr().err

    def test_error_exit_code(self, capsys):
        assert main(["experiment", "no-such-thing"]) == 1
        assert main(["experiment", "const-kernel-blowup", "--param", "gammas=0.3,0.6"]) == 1
        assert main(["experiment", "const-kernel-blowup", "--param", "oops"]) == 1

    def test_describe(self, capsys):
        assert main(["experiment", "zero-order-log", "--describe"]) == 0
        assert "quantity" in capsys.readouterr().out

    def test_config_file_and_out(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "t.csv"
        cfg.write_text(f"quadrature=false\nformat=csv\nout={out}\nseed=1\n")
        assert main(["experiment", "const-kernel-blowup", "--config", str(cfg)]) == 0
        assert out.read_text().startswith("gamma,")

    def test_audit(self, capsys):
        assert main(["audit", "--profile", "stable:alpha=1.0"]) == 0
        assert json.loads(capsys.readouterr().out)["a2_constant"] == pytest.approx(2.414213562373095)
        assert main(["audit", "--profile", "constant_one"]) == 2

    def test_audit_csv(self, capsys):
        assert main(["audit", "--format", "csv"]) == 0
        assert capsys.readouterr().out.splitlines()[0].startswith("r,")

    def test_whitney(self, tmp_path, capsys):
        out = tmp_path / "cubes.jsonl"
        assert main(["whitney", "--domain", "square", "--depth", "5", "--out", str(out)]) == 0
        assert json.loads(capsys.readouterr().out)["violations"]["total"] == 0
        assert out.exists()

    def test_seminorm(self, capsys):
        assert main(["seminorm", "--function", "coordinate", "--theta", "1"]) == 0
        res = json.loads(capsys.readouterr().out)
        assert res["full"]["value_squared"] == pytest.approx(1 / 6, rel=1e-8)
        assert res["ratio"]["1.0"] == pytest.approx(8 ** 0.5, rel=1e-8)

    def test_seminorm_strip(self, capsys):
        assert main(["seminorm", "--domain", "strip:k=1:l=1", "--function", "strip_ramp:n=4",
                     "--kernel", "stable:alpha=1.5", "--theta", "1"]) == 0
        assert json.loads(capsys.readouterr().out)["monotone"] is True

    def test_bad_domain(self, capsys):
        assert main(["seminorm", "--domain", "disk"]) == 1
