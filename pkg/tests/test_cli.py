import json
import math

import pytest

from concavekit.cli import main


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def gw_field(tmp_path):
    return write(tmp_path / "gw.json", {"kind": "gauss_weierstrass", "n": 1})


@pytest.fixture
def interval_body(tmp_path):
    return write(tmp_path / "body.json", {"kind": "interval", "a": -1, "b": 1})


@pytest.fixture
def st_domain(tmp_path):
    return write(
        tmp_path / "dom.json",
        {"body": {"kind": "interval", "a": -2, "b": 2}, "t_lo": 0.5, "t_hi": 4.0},
    )


class TestMeans:
    def test_geometric_mean(self, capsys):
        assert main(["means", "--p", "0", "--a", "1", "--b", "4", "--lambda", "0.5"]) == 0
        assert capsys.readouterr().out.strip() == "2.0"

    def test_ell_prints_minus_inf(self, capsys):
        assert main(["means", "--ell", "--p", "3", "--q", "-3"]) == 0
        assert capsys.readouterr().out.strip() == "-inf"

    def test_bad_lambda_is_input_error(self):
        assert main(["means", "--p", "1", "--a", "1", "--b", "2", "--lambda", "2"]) == 2


class TestCheck:
    def test_heat_kernel_almost_strict_passes(self, gw_field, st_domain, tmp_path):
        out = tmp_path / "rep.json"
        rc = main(
            [
                "check",
                "parabolic",
                "--field",
                gw_field,
                "--alpha",
                "0.5",
                "--p",
                "-1",
                "--mode",
                "almost-strict",
                "--samples",
                "1500",
                "--seed",
                "3",
                "--domain",
                st_domain,
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        rep = json.loads(out.read_text())
        assert rep["verdict"] == "pass"
        assert rep["manifest"]["command"] == "check"
        assert rep["manifest"]["seed"] == 3

    def test_indicator_strict_maps_to_exit_1(self, tmp_path):
        field = write(
            tmp_path / "ind.json",
            {"kind": "indicator", "body": {"kind": "interval", "a": -1, "b": 1}},
        )
        dom = write(tmp_path / "dom2.json", {"kind": "interval", "a": -2, "b": 2})
        rc = main(
            [
                "check",
                "concavity",
                "--field",
                field,
                "--p",
                "inf",
                "--mode",
                "strict",
                "--samples",
                "800",
                "--seed",
                "1",
                "--domain",
                dom,
            ]
        )
        assert rc == 1

    def test_malformed_json_is_input_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert main(["check", "concavity", "--field", str(bad), "--p", "1"]) == 2

    def test_determinism_bytewise(self, gw_field, st_domain, tmp_path, capsys):
        args = [
            "check",
            "parabolic",
            "--field",
            gw_field,
            "--alpha",
            "0.5",
            "--p",
            "-1",
            "--mode",
            "plain",
            "--samples",
            "600",
            "--seed",
            "9",
            "--domain",
            st_domain,
        ]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        second = capsys.readouterr().out

        def strip_wall(text):
            d = json.loads(text)
            d["manifest"].pop("wall_time_s")
            return json.dumps(d, sort_keys=True)

        assert strip_wall(first) == strip_wall(second)


class TestConvolve:
    def test_csv_grid(self, interval_body, tmp_path):
        out = tmp_path / "grid.csv"
        rc = main(
            [
                "convolve",
                "--kernel",
                "poisson",
                "--body",
                interval_body,
                "--xgrid=-1:1:3",
                "--tgrid",
                "1:1:1",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("# manifest:")
        assert lines[1] == "x0,t,value,est_error"
        rows = [line.split(",") for line in lines[2:]]
        assert len(rows) == 3
        center = [r for r in rows if float(r[0]) == 0.0][0]
        assert float(center[2]) == pytest.approx(0.5, abs=1e-4)
        assert float(center[3]) >= 0


class TestBBL:
    def test_flagship_instance(self, tmp_path, capsys):
        inst = write(
            tmp_path / "inst.json",
            {
                "f0": {"kind": "indicator", "body": {"kind": "interval", "a": 0, "b": 1}},
                "f1": {"kind": "indicator", "body": {"kind": "interval", "a": 2, "b": 4}},
                "ell": 0,
                "lambda": 0.5,
            },
        )
        assert main(["bbl", "--instance", inst]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["lhs"] == pytest.approx(1.5, abs=0.01)
        assert rep["rhs"] == pytest.approx(math.sqrt(2), rel=1e-12)


class TestMaximize:
    def test_problem_file(self, tmp_path, capsys):
        prob = write(
            tmp_path / "prob.json",
            {
                "objective": {"kind": "oracle_p", "a": 1, "b": 4},
                "feasible": {"kind": "box", "lo": [0, 0.5], "hi": [0, 5]},
                "multistart": 4,
            },
        )
        assert main(["maximize", "--problem", prob]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert abs(rep["argmax"][1] - 2.0) < 1e-6
        assert rep["unique"]

    def test_regiomontanus_subcommand(self, tmp_path, capsys):
        cons = write(tmp_path / "cons.json", {"kind": "box", "lo": [0, 0.5], "hi": [0, 5]})
        assert main(["regiomontanus", "--a", "1", "--b", "4", "--constraint", cons]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert abs(rep["argmax"][1] - 2.0) < 1e-6

    def test_degenerate_picture_is_input_error(self, tmp_path):
        cons = write(tmp_path / "c.json", {"kind": "box", "lo": [0, 0.5], "hi": [0, 5]})
        assert main(["regiomontanus", "--a", "2", "--b", "2", "--constraint", cons]) == 2


class TestTopLevel:
    def test_version_flag(self, capsys):
        assert main(["--version"]) == 0
        assert "concavekit" in capsys.readouterr().out

    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 2
