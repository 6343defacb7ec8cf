from pathlib import Path
import math
import tempfile

import numpy as np
import pandas as pd

from subclock.errors import ConfigError, DataError, ParseError, StageError
from subclock.laws.compound import CompoundChain
from subclock.laws.logprice import ReturnLaw, two_level
from subclock.laws.subordinators import IGParams, LevyStableParams
from subclock.pipeline import (
    Report,
    RunConfig,
    emit_density,
    emit_moment_table,
    emit_pwf_table,
    ingest,
    run_fit,
    simulate,
)
from subclock.test.harness import TestCase


class PipelineCase(TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp  = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def csv(self, text: str, name: str = "data.csv",
            newline: str = "\n") -> Path:
        path = self.tmp / name
        path.write_bytes(text.replace("\n", newline).encode())
        return path


class TestIngest(PipelineCase):

    def test_log_return(self):
        path   = self.csv("date,value\n2020-01-01,100\n2020-01-02,110\n")
        series = ingest(path)
        self.assertClose(series.values, [math.log(1.1)])
        assert series.dates == ("2020-01-02",)

    def test_square(self):
        path   = self.csv("date,value\n2020-01-01,20\n2020-01-02,30\n")
        series = ingest(path, "square")
        self.assertClose(series.values, [400.0, 900.0])
        assert series.count == 2

    def test_crlf(self):
        path = self.csv("date,value\n2020-01-01,1.5\n2020-01-02,2.5\n",
                        newline="\r\n")
        self.assertClose(ingest(path, "raw").values, [1.5, 2.5])

    def test_duplicated_date(self):
        path = self.csv("date,value\n2020-01-01,1\n2020-01-01,2\n")
        with self.assertRaises(ParseError) as caught:
            ingest(path, "raw")
        assert caught.exception.line == 3

    def test_dates_going_back(self):
        path = self.csv("date,value\n2020-01-02,1\n2020-01-01,2\n")
        with self.assertRaises(ParseError) as caught:
            ingest(path, "raw")
        assert caught.exception.line == 3

    def test_bad_rows(self):
        for body, line in (("2020-01-01,1\n2020-13-01,2\n", 3),
                           ("2020-01-01,x\n", 2),
                           ("2020-01-01,1\n2020-01-02,\n", 3)):
            with self.assertRaises(ParseError) as caught:
                ingest(self.csv("date,value\n" + body), "raw")
            assert caught.exception.line == line

    def test_bad_header(self):
        with self.assertRaises(ParseError) as caught:
            ingest(self.csv("day,close\n2020-01-01,1\n"), "raw")
        assert caught.exception.line == 1

    def test_missing_dropped(self):
        path   = self.csv("date,value\n2020-01-01,1\n2020-01-02,\n"
                          "2020-01-03,3\n")
        series = ingest(path, "raw", missing="drop")
        self.assertClose(series.values, [1.0, 3.0])

    def test_nonpositive_price(self):
        path = self.csv("date,value\n2020-01-01,100\n2020-01-02,0\n")
        with self.assertRaises(DataError):
            ingest(path)

    def test_unknown_transform_and_file(self):
        with self.assertRaises(ConfigError):
            ingest(self.csv("date,value\n2020-01-01,1\n"), "cube")
        with self.assertRaises(DataError):
            ingest(self.tmp / "absent.csv")


class TestSimulate(PipelineCase):

    def test_raw_round_trip(self):
        path   = self.tmp / "sim.csv"
        series = simulate("normal", {"mu": 0.0, "sigma": 1.0}, 50, path,
                          seed=1)
        back   = ingest(path, "raw")
        assert np.array_equal(back.values, series.values)
        assert back.dates == series.dates

    def test_prices_give_back_draws(self):
        path  = self.tmp / "prices.csv"
        simulate("normal", {"mu": 0.0, "sigma": 0.01}, 100, path,
                 seed=2, form="prices")
        raw   = simulate("normal", {"mu": 0.0, "sigma": 0.01}, 100,
                         self.tmp / "raw.csv", seed=2)
        self.assertClose(ingest(path).values, raw.values, rtol=0,
                         atol=1e-12)

    def test_levels_undo_square(self):
        path = self.tmp / "levels.csv"
        simulate("ig", {"mu_U": 1.5, "lambda_U": 3.0}, 200, path,
                 seed=3, form="levels")
        raw  = simulate("ig", {"mu_U": 1.5, "lambda_U": 3.0}, 200,
                        self.tmp / "raw.csv", seed=3)
        self.assertClose(ingest(path, "square").values, raw.values,
                         rtol=1e-12)

    def test_seeded(self):
        a = simulate("ig", {"mu_U": 1.0, "lambda_U": 2.0}, 20,
                     self.tmp / "a.csv", seed=9)
        b = simulate("ig", {"mu_U": 1.0, "lambda_U": 2.0}, 20,
                     self.tmp / "b.csv", seed=9)
        assert (self.tmp / "a.csv").read_bytes() == \
            (self.tmp / "b.csv").read_bytes()
        assert np.array_equal(a.values, b.values)

    def test_bad_form(self):
        with self.assertRaises(ConfigError):
            simulate("normal", {"mu": 0.0, "sigma": 1.0}, 5,
                     self.tmp / "x.csv", form="returns")


class TestTables(PipelineCase):

    def test_moment_table_kurtosis_note(self):
        law   = CompoundChain((IGParams(8096.84, 90189.7),))
        table = emit_moment_table(law)
        rows  = {r["moment"]: r for r in table["rows"]}
        assert table["status"] == "finite"
        self.assertClose(rows["excess_kurtosis"]["model"], 1.3466,
                         atol=1e-4)
        assert rows["mean"]["sample"] is None
        assert any("-1.6534" in note for note in table["notes"])

    def test_moment_table_with_sample(self):
        law   = CompoundChain((IGParams(1.0, 2.0),))
        data  = law.sample(1000, self.rng())
        table = emit_moment_table(law, data)
        rows  = {r["moment"]: r for r in table["rows"]}
        self.assertClose(rows["mean"]["sample"], np.mean(data))

    def test_undefined_moments(self):
        law   = ReturnLaw(two_level(0.0, 0.1, 0.3, 1.0,
                          LevyStableParams(0.5), LevyStableParams(0.5)),
                          "NCLS")
        table = emit_moment_table(law)
        assert table["status"] == "undefined"
        assert all(r["model"] is None for r in table["rows"])

    def test_density_files(self):
        law  = CompoundChain((IGParams(1.0, 2.0),))
        data = law.sample(500, self.rng(1))
        ref  = emit_density(law, self.tmp / "dens.csv", data=data)
        grid = pd.read_csv(ref["path"])
        assert list(grid.columns) == ["x", "pdf", "cdf"]
        assert len(grid) == ref["points"]
        self.assertClose(grid["cdf"].iloc[-1], 1.0)
        side = pd.read_csv(ref["kde_path"])
        assert list(side.columns) == ["x", "kde"]
        assert ref["kde_path"].endswith("dens.kde.csv")

    def test_pwf_table(self):
        law  = ReturnLaw(two_level(0.0, 0.0, -0.281, 0.252,
                         IGParams(0.122, 12.54), IGParams(0.0035, 17.66)),
                         "NCIG")
        path = emit_pwf_table(law, self.tmp / "pwf.csv", n=21)
        out  = pd.read_csv(path)
        assert list(out.columns) == ["u", "tk", "prelec", "general"]
        g = out["general"].to_numpy()
        assert g[0] == 0.0 and g[-1] == 1.0
        assert np.all((g >= 0) & (g <= 1))


class TestRun(PipelineCase):

    def ig_config(self, **extra) -> RunConfig:
        path = self.tmp / "vix2.csv"
        simulate("ig", {"mu_U": 1.5, "lambda_U": 3.0}, 500, path, seed=4)
        return RunConfig.from_dict({"model": "ig", "input": str(path),
                                    "transform": "raw", **extra})

    def test_ig_run(self):
        report_path = self.tmp / "out" / "report.json"
        cfg    = self.ig_config(outputs={"report": str(report_path)})
        report = run_fit(cfg)
        assert report.fit["init"]["source"] == "closed-form"
        assert set(report.diagnostics) == {"ks", "kuiper", "adjusted_jb"}
        assert np.isfinite(report.fit["loglik"])
        assert report.series["count"] == 500
        assert report_path.is_file()

    def test_report_is_deterministic(self):
        cfg = self.ig_config()
        assert run_fit(cfg).payload() == run_fit(cfg).payload()

    def test_report_round_trip(self):
        report = run_fit(self.ig_config())
        back   = Report.from_json(report.to_json())
        assert back.fit == report.fit
        assert back.provenance == report.provenance
        assert back.created == report.created

    def test_stage_errors(self):
        path = self.csv("date,value\n2020-01-01,1\n2020-01-02,-2\n"
                        "2020-01-03,3\n2020-01-06,4\n")
        cfg  = RunConfig(model="ig", input=str(path), transform="raw")
        with self.assertRaises(StageError) as caught:
            run_fit(cfg)
        assert caught.exception.stage == "fit"
        assert caught.exception.exit_code == 3

        dup = self.csv("date,value\n2020-01-01,1\n2020-01-01,2\n",
                       name="dup.csv")
        with self.assertRaises(StageError) as caught:
            run_fit(RunConfig(model="ig", input=str(dup), transform="raw"))
        assert caught.exception.stage == "ingest"

    def test_config_errors(self):
        path = str(self.csv("date,value\n2020-01-01,1\n"))
        for data in ({"model": "nope", "input": path},
                     {"model": "ig", "input": str(self.tmp / "none.csv")},
                     {"model": "ig", "input": path, "bogus": 1},
                     {"model": "ig", "input": path, "ecf": {"count": 0}},
                     {"model": "ig", "input": path,
                      "fft": {"grid_size": 1000}},
                     {"model": "ig", "input": path,
                      "outputs": {"plot": "x.png"}}):
            with self.assertRaises(ConfigError):
                RunConfig.from_dict(data)

    def test_load_with_overrides(self):
        path = self.csv("date,value\n2020-01-01,1\n")
        conf = self.tmp / "run.json"
        conf.write_text('{"model": "ig", "input": "%s", '
                        '"ecf": {"count": 32}}' % path.as_posix())
        cfg = RunConfig.load(conf, transform="raw", ecf={"span": 2.0})
        assert cfg.transform == "raw"
        assert cfg.ecf.count == 32 and cfg.ecf.span == 2.0
        with self.assertRaises(ConfigError):
            RunConfig.load(None)
        conf.write_text("{not json")
        with self.assertRaises(ConfigError):
            RunConfig.load(conf)
