from unittest import mock
from pathlib import Path
import tempfile
import json
import sys

from subclock.cli import _fixes, _params, main
from subclock.config import Config, DEFAULTS, cast, sanitize_args
from subclock.errors import ConfigError
from subclock.test.harness import TestCase, slow


IG = '{"mu_U": 1.5, "lambda_U": 3.0}'
NCIG = json.dumps({"lambda_U": 17.66, "mu_U": 0.0035, "lambda_T": 12.54,
                   "mu_T": 0.122, "rho": -0.281, "sigma": 0.252,
                   "mu": 0.0, "gamma": 0.0})


class CLICase(TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp  = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def run_cli(self, *argv) -> int:
        with mock.patch.object(sys, "argv", ["subclock", *argv]):
            with self.assertRaises(SystemExit) as caught:
                main()
        return caught.exception.code

    def simulated(self, n: int = 300) -> Path:
        path = self.tmp / "vix2.csv"
        assert self.run_cli("simulate", str(path), "--model", "ig",
                            "--params", IG, "--n", str(n), "--seed",
                            "5") == 0
        return path


class TestCommands(CLICase):

    def test_simulate(self):
        path = self.simulated(50)
        lines = path.read_text().splitlines()
        assert lines[0] == "date,value"
        assert len(lines) == 51

    def test_fit(self):
        data   = self.simulated()
        report = self.tmp / "report.json"
        code   = self.run_cli("fit", "--model", "ig", "--input",
                              str(data), "--transform", "raw",
                              "--report", str(report))
        assert code == 0
        doc = json.loads(report.read_text())
        assert doc["fit"]["model"] == "ig"
        assert set(doc["diagnostics"]) == {"ks", "kuiper", "adjusted_jb"}

    @slow
    def test_fit_ncig_series(self):
        data = self.tmp / "returns.csv"
        assert self.run_cli("simulate", str(data), "--model", "ncig",
                            "--params", NCIG, "--n", "100000",
                            "--seed", "6") == 0
        report = self.tmp / "report.json"
        assert self.run_cli("fit", "--model", "ncig", "--input",
                            str(data), "--transform", "raw", "--fix",
                            "mu_T=0.122", "--fix", "mu_U=0.0035",
                            "--report", str(report)) == 0
        fit = json.loads(report.read_text())["fit"]
        assert fit["fixed"] == ["mu_T", "mu_U"]
        self.assertClose(fit["params"]["sigma"], 0.252, rtol=0.15)
        assert set(fit["weak"]) <= {"lambda_T", "rho", "lambda_U", "mu",
                                    "gamma"}

    def test_fit_with_config_file(self):
        data = self.simulated()
        conf = self.tmp / "run.json"
        conf.write_text(json.dumps({"model": "ig", "input": str(data),
                                    "transform": "raw"}))
        moments = self.tmp / "moments.json"
        assert self.run_cli("fit", "--config", str(conf), "--moments",
                            str(moments)) == 0
        assert json.loads(moments.read_text())["status"] == "finite"

    def test_density(self):
        out = self.tmp / "normal.csv"
        assert self.run_cli("density", str(out), "--model", "normal",
                            "--params", '{"mu": 0, "sigma": 1}',
                            "--grid-size", "4096") == 0
        assert len(out.read_text().splitlines()) == 4097

    def test_diagnose(self):
        data   = self.simulated()
        report = self.tmp / "diag.json"
        assert self.run_cli("diagnose", "--model", "ig", "--params", IG,
                            "--input", str(data), "--transform", "raw",
                            "--report", str(report)) == 0
        doc = json.loads(report.read_text())
        assert doc["model"] == "ig"
        assert "ks" in doc["diagnostics"]

    def test_moments(self):
        out = self.tmp / "moments.json"
        assert self.run_cli("moments", "--model", "ig", "--params", IG,
                            "--output", str(out)) == 0
        rows = json.loads(out.read_text())["rows"]
        assert rows[0]["moment"] == "mean"
        self.assertClose(rows[0]["model"], 1.5)


class TestExitCodes(CLICase):

    def test_config_errors(self):
        data = self.simulated(20)
        assert self.run_cli("fit", "--model", "nope", "--input",
                            str(data)) == 2
        assert self.run_cli("moments", "--model", "ig", "--params",
                            "[1, 2]") == 2
        assert self.run_cli("fit", "--input", str(data)) == 2

    def test_data_errors(self):
        bad = self.tmp / "dup.csv"
        bad.write_text("date,value\n2020-01-01,1\n2020-01-01,2\n")
        assert self.run_cli("fit", "--model", "ig", "--input", str(bad),
                            "--transform", "raw") == 3

    def test_argparse_rejects_choice(self):
        assert self.run_cli("fit", "--transform", "cube") == 2


class TestHelpers(TestCase):

    def test_params(self):
        assert _params('{"a": 1, "b": 2.5}') == {"a": 1.0, "b": 2.5}
        for text in ("{", "[1]", '{"a": "x"}'):
            with self.assertRaises(ConfigError):
                _params(text)

    def test_fixes(self):
        assert _fixes([]) is None
        assert _fixes(["mu_T=2.05", "mu_U = none"]) == {"mu_T": 2.05,
                                                         "mu_U": None}
        for item in ("mu_T", "=1", "mu_T=abc"):
            with self.assertRaises(ConfigError):
                _fixes([item])


class TestConfig(TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.path = str(Path(self._tmp.name) / "defaults.json")

    def tearDown(self):
        self._tmp.cleanup()

    def test_created_with_defaults(self):
        config = Config(self.path)
        assert Path(self.path).is_file()
        assert config.get("grid_size") == DEFAULTS["grid_size"][1]

    def test_set_persists(self):
        Config(self.path).set("grid_size", 4096)
        assert Config(self.path).get("grid_size") == 4096

    def test_set_validates(self):
        config = Config(self.path)
        with self.assertRaises(ConfigError):
            config.set("grid_size", 1000)
        with self.assertRaises(ConfigError):
            config.set("ecf_weight", "box")
        with self.assertRaises(ConfigError):
            config.set("nope", 1)

    def test_reset(self):
        config = Config(self.path)
        config.set("restarts", 3)
        config.set("workers", 4)
        config.reset("restarts")
        assert config.get("restarts") == DEFAULTS["restarts"][1]
        assert config.get("workers") == 4
        config.reset("all")
        assert config.get("workers") == DEFAULTS["workers"][1]
        with self.assertRaises(ConfigError):
            config.reset("nope")

    def test_cast(self):
        assert cast("grid_size", "4096.0") == 4096
        assert cast("color", "yes") is True
        assert cast("ecf_span", "2.5") == 2.5
        for key, raw in (("grid_size", "1.5"), ("color", "maybe"),
                         ("tolerance", "tiny")):
            with self.assertRaises(ConfigError):
                cast(key, raw)

    def test_sanitize_args(self):
        for args in (["grid_size", "4096"], ["grid_size=4096"],
                     ["grid_size", ":", "4096"], ["grid_size==4096"]):
            assert sanitize_args(args) == ["grid_size", "4096"]
        assert sanitize_args(["list"]) == ["list", "hapana"]
        with self.assertRaises(ConfigError):
            sanitize_args(["bogus"])
