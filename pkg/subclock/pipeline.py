"""
Batch pipeline: CSV ingest, run configuration, the fit run with
its diagnostics, JSON reports and the CSV tables written for
external plotting.
"""
# ========================= STANDARDS =======================
from dataclasses import dataclass, field, asdict
from datetime import datetime, timezone
from pathlib import Path
import json
import re

# ======================= THIRD-PARTIES =====================
import pandas as pd
import numpy as np

# ========================== LOCALS =========================
from .estimation import ECFConfig, FitResult, fit_model, mom_init
from .estimation import loglik_fft, covering_grid, sample_moments
from .estimation import get_model
from .behavioral import tk_pwf, prelec_pwf, general_pwf
from .diagnostics import run_diagnostics
from .laws.logprice import ReturnLaw, single_subordinated
from .numerics import FFTConfig, DensityGrid, kde
from .errors import ConfigError, DataError, ParseError, StageError
from .errors import FitError, SubclockError, require
from .utils import sha256_file, sha256_json, to_json, rng_from
from .reporters.report import write_json, write_table
from .types import MomentTable, DensityRef, Provenance
from .constants import TRANSFORMS, SCHEMA, VERSION, SEED


# ========================== SERIES =========================
@dataclass(frozen=True)
class ReturnSeries:
    dates:     tuple
    values:    np.ndarray
    transform: str
    source:    str = ""

    @property
    def count(self) -> int:
        return int(self.values.size)

    def summary(self) -> dict:
        return {"count": self.count, "transform": self.transform,
                "first_date": self.dates[0] if self.dates else None,
                "last_date": self.dates[-1] if self.dates else None}


def _line_of(error: Exception) -> int | None:
    found = re.search(r"line (\d+)", str(error))
    return int(found.group(1)) if found else None


def ingest(path: str | Path, transform: str = "log-return",
           missing: str = "fail") -> ReturnSeries:
    """
    Read a `date,value` CSV and apply a transform.

    Args:
        path: UTF-8 CSV, LF or CRLF line ends
        transform (str): log-return (ln P_t/P_{t-1}), square or raw
        missing (str): fail on empty rows/values, or drop them

    Returns:
        ReturnSeries: Values in file order; log-returns carry the
                      dates of their second price

    Raises:
        ParseError: malformed rows, bad dates or numbers, repeated
                    or decreasing dates (all with line numbers)
        DataError: nonpositive prices in log-return mode, or too
                   few rows
    """
    require(transform in TRANSFORMS, f"transform must be one of "
            + f"{TRANSFORMS}, got {transform}", ConfigError)
    require(missing in ("fail", "drop"), "missing must be fail or "
            + "drop", ConfigError)
    path = Path(path)
    if not path.is_file(): raise DataError(f"no such file: {path}")

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                skip_blank_lines=False, encoding="utf-8-sig")
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed CSV: {e}", _line_of(e)) from e
    except (pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ParseError(f"unreadable CSV: {e}", 1) from e
    frame = frame.fillna("")

    header = [c.strip().lower() for c in frame.columns]
    if header != ["date", "value"]:
        raise ParseError("header must be 'date,value', got "
              + f"'{','.join(frame.columns)}'", 1)

    parsed = pd.to_datetime(frame.iloc[:, 0].str.strip(), format=
             "ISO8601", errors="coerce")
    dates, values, stamps = [], [], []
    for row, (date, value, stamp) in enumerate(zip(frame.iloc[:, 0],
            frame.iloc[:, 1], parsed)):
        line  = row + 2
        date  = (date or "").strip()
        value = (value or "").strip()
        if not date or not value:
            if missing == "drop": continue
            raise ParseError("missing date or value", line)

        if pd.isna(stamp):
            raise ParseError(f"bad ISO-8601 date '{date}'", line)
        try: number = float(value)
        except ValueError:
            raise ParseError(f"bad number '{value}'", line) from None
        if not np.isfinite(number):
            raise ParseError(f"non-finite value '{value}'", line)

        if stamps and stamp == stamps[-1][0]:
            raise ParseError(f"duplicated date {date} (first at line "
                  + f"{stamps[-1][1]})", line)
        if stamps and stamp < stamps[-1][0]:
            raise ParseError(f"date {date} goes back in time", line)
        if transform == "log-return" and number <= 0:
            raise DataError(f"line {line}: nonpositive price {value}")

        stamps.append((stamp, line))
        dates.append(date)
        values.append(number)

    raw = np.array(values, dtype=float)
    if transform == "log-return":
        require(raw.size >= 2, "log-returns need at least 2 prices",
                DataError)
        out, dates = np.log(raw[1:] / raw[:-1]), dates[1:]
    elif transform == "square": out = raw * raw
    else: out = raw

    require(out.size >= 1, f"{path} holds no data rows", DataError)
    return ReturnSeries(tuple(dates), out, transform, str(path))


def write_series(series: ReturnSeries, path: str | Path) -> Path:
    """date,value CSV with 17 significant digits (exact reread)."""
    return write_table({"date": list(series.dates), "value":
           [f"{v:.17g}" for v in series.values]}, path)


# ========================== CONFIG =========================
@dataclass(frozen=True)
class RunConfig:
    """
    Everything a fit run depends on.

    Attributes:
        model (str): Registry tag
        input (str): date,value CSV
        transform (str): log-return | square | raw
        ecf (ECFConfig): Objective grid and search budget
        fft (FFTConfig): Density grid
        seed (int): Master seed of the multi-start search
        fixed (dict): Parameter overrides held fixed
        outputs (dict): report, density, moments and pwf paths
        missing (str): fail | drop
    """
    model:     str
    input:     str
    transform: str       = "log-return"
    ecf:       ECFConfig = field(default_factory=ECFConfig)
    fft:       FFTConfig = field(default_factory=FFTConfig)
    seed:      int       = SEED
    fixed:     dict      = field(default_factory=dict)
    outputs:   dict      = field(default_factory=dict)
    missing:   str       = "fail"

    def __post_init__(self):
        get_model(self.model)
        require(self.transform in TRANSFORMS, "transform must be one "
                + f"of {TRANSFORMS}", ConfigError)
        require(Path(self.input).is_file(), "input file not found: "
                + f"{self.input}", ConfigError)
        require(isinstance(self.seed, int), "seed must be an integer",
                ConfigError)
        known = {"report", "density", "moments", "pwf"}
        extra = set(self.outputs) - known
        require(not extra, f"unknown outputs {sorted(extra)}",
                ConfigError)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        try:
            data["ecf"] = ECFConfig(**data.get("ecf", {}))
            fft         = data.get("fft", {})
            data["fft"] = FFTConfig(**fft)
            return cls(**data)
        except TypeError as e:
            raise ConfigError(f"bad run config: {e}") from e
        except SubclockError as e:
            if isinstance(e, ConfigError): raise
            raise ConfigError(str(e)) from e

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides
            ) -> "RunConfig":
        """JSON file (optional) with flag overrides on top."""
        data = {}
        if path is not None:
            try: data = json.loads(Path(path).read_text())
            except FileNotFoundError:
                raise ConfigError(f"no such config file: {path}") \
                    from None
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}: invalid JSON ({e})") \
                    from None
            require(isinstance(data, dict), f"{path}: expected a JSON "
                    + "object", ConfigError)
        for key, value in overrides.items():
            if value is None: continue
            if isinstance(value, dict):
                data[key] = {**data.get(key, {}), **value}
            else: data[key] = value
        require("model" in data and "input" in data, "a run needs a "
                + "model and an input file", ConfigError)
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["input"] = str(self.input)
        return out


# ========================== REPORT =========================
@dataclass
class Report:
    fit:         dict
    diagnostics: dict
    moments:     MomentTable
    density:     DensityRef | None
    provenance:  Provenance
    series:      dict = field(default_factory=dict)
    schema:      int  = SCHEMA
    created:     str  = ""

    def payload(self) -> dict:
        out = asdict(self)
        out.pop("created")
        return out

    def to_json(self) -> str:
        return to_json(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        require(data.get("schema") == SCHEMA, "unsupported report "
                + f"schema {data.get('schema')}", DataError)
        return cls(**data)

    def write(self, path: str | Path) -> Path:
        return write_json(asdict(self), path)


def _stage(name: str, fn, *args, **kwargs):
    try: return fn(*args, **kwargs)
    except StageError: raise
    except SubclockError as e: raise StageError(name, e) from e


def run_fit(cfg: RunConfig) -> Report:
    """
    ingest -> init -> fit -> density -> loglik -> diagnostics ->
    moments -> report. Errors come back as StageError tagged with
    the stage they happened in.
    """
    model  = get_model(cfg.model)
    series = _stage("ingest", ingest, cfg.input, cfg.transform,
             cfg.missing)
    data   = series.values

    init = _stage("init", _safe_init, model, data, cfg.fixed)
    fit  = _stage("fit", fit_model, model, data, cfg.ecf, cfg.fixed,
           cfg.seed, cfg.fft, False)
    if fit.status == "failed":
        raise StageError("fit", FitError("every start failed"))
    if init is not None: fit.init.setdefault("moments", init)

    law  = fit.law()
    grid = _stage("density", covering_grid, law.chf, data, cfg.fft)
    fit.loglik = _stage("loglik", loglik_fft, law.chf, data,
                 grid=grid)
    tests = _stage("diagnostics", run_diagnostics, grid, data)
    fit.diagnostics = {k: t.to_dict() for k, t in tests.items()}

    moments = _stage("moments", emit_moment_table, fit, data)
    density = None
    if cfg.outputs.get("density"):
        density = _stage("density", emit_density, law,
                  cfg.outputs["density"], data=data, grid=grid)
    if cfg.outputs.get("moments"):
        write_json(moments, cfg.outputs["moments"])
    if cfg.outputs.get("pwf") and isinstance(law, ReturnLaw):
        _stage("pwf", emit_pwf_table, law, cfg.outputs["pwf"],
               cfg=cfg.fft)

    report = Report(
        fit         = fit.to_dict(),
        diagnostics = fit.diagnostics,
        moments     = moments,
        density     = density,
        provenance  = {"input_sha256": sha256_file(cfg.input),
                       "config_sha256": sha256_json(cfg.to_dict()),
                       "version": VERSION, "schema": SCHEMA},
        series      = series.summary(),
        created     = datetime.now(timezone.utc).isoformat(),
    )
    if cfg.outputs.get("report"): report.write(cfg.outputs["report"])
    return report


def _safe_init(model, data, fixed) -> dict | None:
    if model.direct is not None and not fixed: return None
    try: return mom_init(model, data, fixed)
    except FitError: return None


# ========================== TABLES =========================
def emit_density(law, path: str | Path, cfg: FFTConfig | None =
                 None, data=None, grid: DensityGrid | None = None,
                 kde_points: int = 512) -> DensityRef:
    """
    Write the FFT density as `x,pdf,cdf`; with data, also a
    `<stem>.kde.csv` side car holding the Gaussian KDE on a
    coarser grid over the same range.
    """
    if isinstance(law, FitResult): law = law.law()
    grid = grid or covering_grid(law.chf, data, cfg)
    path = Path(path)
    write_table({"x": grid.x, "pdf": grid.values, "cdf": grid.cdf},
                path)
    out = {"path": str(path), "x0": grid.x0, "dx": grid.dx,
           "points": int(grid.values.size), "renorm": grid.renorm,
           "clipped": grid.clipped, "kde_path": None}

    if data is not None:
        x       = np.linspace(grid.x0, grid.x_max, kde_points)
        kde_out = path.with_suffix(".kde.csv")
        write_table({"x": x, "kde": kde(data, x)}, kde_out)
        out["kde_path"] = str(kde_out)
    return out


MOMENT_ROWS = ("mean", "variance", "skewness", "excess_kurtosis")


def emit_moment_table(fit, data=None) -> MomentTable:
    """
    Model moments next to sample moments, one row each for mean,
    variance, skewness and excess kurtosis (kurtosis - 3, so 0
    for the normal law). Laws without moments get undefined rows.
    """
    law   = fit.law() if isinstance(fit, FitResult) else fit
    model = law.moments()
    samp  = sample_moments(data) if data is not None and np.size(
            data) >= 4 else None
    rows  = [{"moment": name, "model": getattr(model, name),
              "sample": getattr(samp, name) if samp else None}
             for name in MOMENT_ROWS]

    notes = []
    if model.status == "undefined":
        notes.append("the model has no finite moments; rows are "
                     + "undefined")
    elif model.excess_kurtosis is not None:
        notes.append("excess kurtosis = kurtosis - 3; a table "
                     + f"printing {model.excess_kurtosis - 3:.4f} has "
                     + "subtracted 3 twice")
    return {"status": model.status, "rows": rows, "notes": notes}


def emit_pwf_table(law: ReturnLaw, path: str | Path, gamma: float =
                   0.61, delta: float = 1.0, rho: float = 0.65,
                   n: int = 101, cfg: FFTConfig | None = None) -> Path:
    """
    u, tk, prelec and general columns; general maps the
    single-subordinated law's CDF onto the law's own.
    """
    u       = np.linspace(0.0, 1.0, n)
    columns = {"u": u, "tk": tk_pwf(gamma, u),
               "prelec": prelec_pwf(delta, rho, u)}
    if len(law.params.chain) == 2:
        single  = single_subordinated(law).pdf_grid(cfg)
        double  = law.pdf_grid(cfg)
        general = np.array(u)
        general[1:-1] = general_pwf(single, double, u[1:-1])
        columns["general"] = general
    return write_table(columns, path)


# ========================= SIMULATE ========================
FORMS = ["raw", "prices", "levels"]


def simulate(model: str, params: dict, n: int, path: str | Path,
             seed: int = SEED, form: str = "raw",
             start: str = "1800-01-01", price0: float = 100.0
            ) -> ReturnSeries:
    """
    Draw n values from a model and write them as date,value on
    business days.

    Args:
        form (str): raw writes the draws; prices writes a price
                    path whose log-returns are the draws; levels
                    writes square roots of positive draws, undone
                    by the square transform
    """
    require(form in FORMS, f"form must be one of {FORMS}", ConfigError)
    require(n >= 1, "n must be >= 1", ConfigError)
    spec  = get_model(model)
    draws = spec.law({**spec.gauge, **params}).sample(n,
            rng_from(seed))

    if form == "prices":
        values = price0 * np.exp(np.concatenate(([0.0],
                 np.cumsum(draws))))
    elif form == "levels":
        require(bool(np.all(draws >= 0)), "levels need nonnegative "
                + "draws", DataError)
        values = np.sqrt(draws)
    else: values = draws

    try: dates = pd.bdate_range(start, periods=values.size)
    except (pd.errors.OutOfBoundsDatetime, OverflowError):
        raise ConfigError(f"{values.size} business days from {start} "
              + "run past the last representable date") from None
    series = ReturnSeries(tuple(d.strftime("%Y-%m-%d") for d in dates),
             values, form, str(path))
    write_series(series, path)
    return series
