import json
import subprocess
import sys

import numpy as np
import pytest
from scipy import stats

from conjugate_channels import __version__
from conjugate_channels.cli import RunConfig, UsageError, main, parse_coin_obs


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "x,density"
    return np.array([[float(v) for v in line.split(",")] for line in lines[1:]])


def trapezoid(data):
    x, y = data[:, 0], data[:, 1]
    return float(np.sum((y[1:] + y[:-1]) * np.diff(x)) / 2)


class TestCoin:
    def test_httt(self, tmp_path, capsys):
        assert main(["coin", "--obs", "HTTT", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "final: Beta(2,4)" in out
        worst = float(out.split("max route discrepancy:")[1])
        assert worst <= 1e-6
        final = read_csv(tmp_path / "final.csv")
        assert final.shape == (101, 2)
        np.testing.assert_allclose(final[:, 1], stats.beta.pdf(final[:, 0], 2, 4), atol=1e-6)
        first = read_csv(tmp_path / "after_first.csv")
        np.testing.assert_allclose(first[:, 1], 2 * first[:, 0], atol=1e-6)

    def test_csv_properties(self, tmp_path):
        main(["coin", "--obs", "HTTT", "--out", str(tmp_path)])
        for name in ("prior.csv", "after_first.csv", "final.csv"):
            data = read_csv(tmp_path / name)
            assert (data[:, 1] >= 0).all()
            assert trapezoid(data) == pytest.approx(1.0, abs=1e-3)

    def test_single_head(self, tmp_path, capsys):
        main(["coin", "--obs", "H", "--out", str(tmp_path)])
        assert "Beta(2,1)" in capsys.readouterr().out
        assert read_csv(tmp_path / "final.csv")[-1, 1] == pytest.approx(2.0, abs=1e-6)

    def test_empty_echoes_prior(self, tmp_path, capsys):
        main(["coin", "--obs", "", "--out", str(tmp_path)])
        assert "Beta(1,1)" in capsys.readouterr().out
        assert not (tmp_path / "after_first.csv").exists()
        assert (tmp_path / "final.csv").read_text() == (tmp_path / "prior.csv").read_text()

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["coin", "--obs", "HTHHT", "--grid", "57", "--out", str(a)])
        main(["coin", "--obs", "HTHHT", "--grid", "57", "--out", str(b)])
        for name in ("prior.csv", "after_first.csv", "final.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_bad_observations(self, tmp_path, capsys):
        assert main(["coin", "--obs", "HXT", "--out", str(tmp_path)]) == 2
        assert "usage" in capsys.readouterr().err

    def test_grid_too_small(self, tmp_path):
        assert main(["coin", "--obs", "H", "--grid", "1", "--out", str(tmp_path)]) == 2

    def test_parse(self):
        assert parse_coin_obs("httt") == [1, 0, 0, 0]
        with pytest.raises(UsageError):
            parse_coin_obs("HQ")
        with pytest.raises(UsageError):
            RunConfig("coin", grid_points=1)


class TestVerify:
    def test_beta_flip(self, tmp_path, capsys):
        report = tmp_path / "r.json"
        assert main(["verify", "--family", "beta-flip", "--report", str(report)]) == 0
        payload = json.loads(report.read_text())
        assert set(payload) == {"version", "config_echo", "reports"}
        assert payload["version"] == __version__
        names = [r["check_name"] for r in payload["reports"]]
        assert "pointwise_law:beta-flip" in names
        assert "negative_control:beta-flip" in names
        assert all(r["passed"] for r in payload["reports"])
        for r in payload["reports"]:
            assert set(r) == {"check_name", "probes", "max_abs_err", "tolerance", "passed"}

    def test_report_byte_identical(self, tmp_path):
        path = tmp_path / "r.json"
        main(["verify", "--family", "normal-normal", "--report", str(path)])
        first = path.read_bytes()
        main(["verify", "--family", "normal-normal", "--report", str(path)])
        assert path.read_bytes() == first

    def test_injected_bad_translator(self, tmp_path):
        assert main(["verify", "--family", "beta-flip", "--inject-bad-translator",
                     "--report", str(tmp_path / "r.json")]) == 1

    def test_unknown_family(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--family", "gamma-poisson"])
        assert exc.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_tolerance_override(self, tmp_path):
        path = tmp_path / "r.json"
        assert main(["verify", "--family", "beta-flip", "--tol", "1e-30", "--report", str(path)]) == 1
        reports = {r["check_name"]: r for r in json.loads(path.read_text())["reports"]}
        assert reports["pointwise_law:beta-flip"]["tolerance"] == 1e-30

    def test_quad_config_env(self, tmp_path, monkeypatch):
        cfg = tmp_path / "quad.json"
        cfg.write_text(json.dumps({"rel_tol": 1e-12}))
        monkeypatch.setenv("CONJUGATE_CHANNELS_QUAD_CONFIG", str(cfg))
        path = tmp_path / "r.json"
        assert main(["verify", "--family", "beta-flip", "--report", str(path)]) == 0
        assert json.loads(path.read_text())["config_echo"]["quad"]["rel_tol"] == 1e-12


class TestSuffstat:
    def test_beta_flip(self, tmp_path, capsys):
        path = tmp_path / "s.json"
        assert main(["suffstat", "--family", "beta-flip", "--batch", "1,0,0,1,1", "--report", str(path)]) == 0
        out = capsys.readouterr().out
        assert "CountSummary(n1=3, n0=2)" in out
        assert len(json.loads(path.read_text())["reports"]) == 3

    def test_normal(self, capsys):
        assert main(["suffstat", "--family", "normal", "--batch", "1,2,3", "--nu", "1"]) == 0
        out = capsys.readouterr().out
        assert "total=6.0" in out
        assert "mu=1.5" in out and "sigma=0.5" in out

    def test_bad_batch(self, capsys):
        assert main(["suffstat", "--family", "beta-flip", "--batch", "1,2"]) == 2
        assert main(["suffstat", "--family", "normal", "--batch", "1,abc"]) == 2

    def test_bad_prior(self):
        assert main(["suffstat", "--family", "beta-flip", "--batch", "1", "--prior", "0,1"]) == 2


class TestEntryPoint:
    def test_module(self):
        res = subprocess.run([sys.executable, "-m", "conjugate_channels", "--version"],
                             capture_output=True, text=True, check=False)
        assert res.returncode == 0
        assert res.stdout.strip() == __version__
