"""
Fitting: empirical characteristic function (ECF) distance,
multi-start Nelder-Mead search, closed-form estimators and the
FFT log-likelihood used to rank models.
"""
# ========================= STANDARDS =======================
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict, replace
import math

# ======================= THIRD-PARTIES =====================
from scipy.optimize import minimize
import numpy as np

# ========================== LOCALS =========================
from ..numerics import FFTConfig, DensityGrid, chf_to_pdf_fft
from ..numerics import moment_span
from ..laws.compound import MomentSet
from ..errors import ConfigError, DataError, DomainError, FitError
from ..errors import GridError, SubclockError, CoverageWarning
from ..errors import IdentificationWarning
from ..errors import require, warn
from ..constants import ECF_COUNT, ECF_SPAN, ECF_WEIGHT, RESTARTS
from ..constants import MAX_EVALS, TOLERANCE, WORKERS, SEED, WEIGHTS
from ..constants import DENSITY_FLOOR
from .models import ModelSpec, get_model
from .models._base import clip_theta, data_moments
from .models.normal import normal_mle
from .models.ig import ig_mle


PENALTY = 1e6


# ========================== CONFIG =========================
@dataclass(frozen=True)
class ECFConfig:
    """
    Attributes:
        count (int): Frequencies on the half line
        span (float): Largest frequency, in units of 1/sd of
                      the data
        weight (str): gaussian (exp(-r^2 sd^2 / 2)) or
                      truncated-uniform (1 up to span)
        restarts (int): Random starts besides the initial one
        max_evals (int): Objective evaluations per start
        tolerance (float): Simplex stop tolerance on the
                           objective
        workers (int): Threads running starts concurrently
    """
    count:     int   = ECF_COUNT
    span:      float = ECF_SPAN
    weight:    str   = ECF_WEIGHT
    restarts:  int   = RESTARTS
    max_evals: int   = MAX_EVALS
    tolerance: float = TOLERANCE
    workers:   int   = WORKERS

    def __post_init__(self):
        checks = [
            (isinstance(self.count, int) and self.count >= 1,
             "ecf count must be a positive integer"),
            (self.span >= 0, "ecf span must be >= 0"),
            (self.weight in WEIGHTS, f"ecf weight must be one of "
             + f"{WEIGHTS}"),
            (isinstance(self.restarts, int) and self.restarts >= 0,
             "restarts must be >= 0"),
            (isinstance(self.max_evals, int) and self.max_evals >= 1,
             "max_evals must be >= 1"),
            (self.tolerance > 0, "tolerance must be > 0"),
            (isinstance(self.workers, int) and self.workers >= 1,
             "workers must be >= 1"),
        ]
        for ok, message in checks: require(ok, message, ConfigError)

    def to_dict(self) -> dict:
        return asdict(self)


# ============================ ECF ==========================
@dataclass(frozen=True)
class EmpiricalCF:
    """
    ECF on the frequency grid with folded quadrature weights:
    the grid covers [0, span/sd] and each weight counts both
    signs of r, so sum(weights |ecf - chf|^2) discretizes the
    integral over the whole line.
    """
    r:       np.ndarray
    values:  np.ndarray
    weights: np.ndarray
    scale:   float

    @classmethod
    def from_data(cls, data, cfg: ECFConfig | None = None,
                  chunk: int = 8192) -> "EmpiricalCF":
        cfg   = cfg or ECFConfig()
        data  = _clean(data)
        scale = float(np.std(data, ddof=1)) if data.size > 1 else 0.0
        if not np.isfinite(scale) or scale <= 0: scale = 1.0

        t = np.linspace(0.0, cfg.span, cfg.count)
        if cfg.count > 1 and cfg.span > 0:
            dt            = t[1] - t[0]
            trap          = np.full(t.size, dt)
            trap[[0, -1]] = dt / 2
        else: trap = np.zeros(t.size)
        w = np.exp(-t * t / 2) if cfg.weight == "gaussian" \
            else np.ones(t.size)
        r = t / scale

        values = np.zeros(r.size, dtype=complex)
        for k in range(0, data.size, chunk):
            values += np.exp(1j * np.outer(data[k:k + chunk], r)
                      ).sum(axis=0)
        return cls(r, values / data.size, 2 * trap * w, scale)


def ecf_objective(chf, data, cfg: ECFConfig | None = None,
                  theta: dict | None = None,
                  ecf: EmpiricalCF | None = None) -> float:
    """
    Weighted integrated squared modulus |ECF(r) - chf(r)|^2.

    Args:
        chf: v -> chf values, or theta -> law when theta is given
        data: Sample (ignored when `ecf` is supplied)
        cfg (ECFConfig): Grid and weight
        theta (dict): Parameters handed to `chf`
        ecf (EmpiricalCF): Precomputed ECF

    Raises:
        DomainError: theta outside the model's region or chf not
                     finite on the grid
    """
    if theta is not None:
        law = chf(theta)
        chf = law.chf if hasattr(law, "chf") else law
    ecf = ecf or EmpiricalCF.from_data(data, cfg)
    with np.errstate(all="ignore"):
        phi = np.asarray(chf(ecf.r), dtype=complex)
    if not np.all(np.isfinite(phi)):
        raise DomainError("model chf is not finite on the ECF grid")
    return float(np.sum(ecf.weights * np.abs(ecf.values - phi) ** 2))


# ========================= RESULTS =========================
@dataclass
class FitResult:
    """
    Attributes:
        model (str): Model tag
        params (dict): Full parameter map, fixed entries included
        objective (float): Final ECF distance
        loglik (float | None): FFT log-likelihood
        init (dict): Start record (source, theta, objective)
        status (str): converged | budget-exhausted | failed
        fixed (list): Names held fixed during the search
        evals (int): Objective evaluations over all starts
        starts (int): Number of starts run
        weak (list): Free names the data pin only in combination
                     at the fitted point
        diagnostics (dict): Test results attached downstream
    """
    model:       str
    params:      dict
    objective:   float
    loglik:      float | None
    init:        dict
    status:      str
    fixed:       list = field(default_factory=list)
    evals:       int  = 0
    starts:      int  = 1
    weak:        list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def law(self):
        return get_model(self.model).law(self.params)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "FitResult":
        return cls(**data)


# ========================== DIRECT =========================
def sample_moments(data) -> MomentSet:
    data = _clean(data)
    require(data.size >= 4, "sample moments need at least 4 points",
            DataError)
    return MomentSet("sample", *data_moments(data))


def mom_init(model: str | ModelSpec, data, fixed: dict | None = None
            ) -> dict:
    """
    Method-of-moments start for a model, fixed values applied on
    top and every entry clipped into the search bounds.

    Raises:
        FitError: sample moments outside the model's reach
    """
    model = _model(model)
    fixed = _fixed(model, fixed)
    data  = _clean(data, model.support)
    theta = {**model.mom_init(data, fixed), **fixed}
    return clip_theta(model, theta)


# ======================== SEARCH ===========================
class _Coords:
    """Free parameters in search coordinates (log for positive)."""

    def __init__(self, model: ModelSpec, fixed: dict):
        self.model  = model
        self.fixed  = fixed
        self.free   = [n for n in model.names if n not in fixed]
        self.is_log = [n in model.positive for n in self.free]
        self.bounds = []
        for name, log in zip(self.free, self.is_log):
            lo, hi = model.bounds(name)
            self.bounds.append((math.log(lo), math.log(hi)) if log
                               else (lo, hi))

    def to_x(self, theta: dict) -> np.ndarray:
        x = [math.log(theta[n]) if log else theta[n] for n, log
             in zip(self.free, self.is_log)]
        return self.clip(np.array(x, dtype=float))

    def to_theta(self, x: np.ndarray) -> dict:
        theta = dict(self.fixed)
        for n, log, value in zip(self.free, self.is_log, x):
            theta[n] = float(math.exp(value) if log else value)
        return {n: theta[n] for n in self.model.names}

    def clip(self, x: np.ndarray) -> np.ndarray:
        lo, hi = np.array(self.bounds, dtype=float).reshape(-1, 2).T
        return np.clip(x, lo, hi)

    def jitter(self, x: np.ndarray, rng: np.random.Generator
              ) -> np.ndarray:
        step = np.where(self.is_log, 0.5, 0.25 * np.abs(x) + 0.05)
        return self.clip(x + step * rng.standard_normal(x.size))


def _penalized(model: ModelSpec, coords: _Coords, ecf: EmpiricalCF):
    def objective(x: np.ndarray) -> float:
        try:
            value = ecf_objective(model.law, None, theta=coords
                    .to_theta(x), ecf=ecf)
        except (SubclockError, FloatingPointError, OverflowError,
                ZeroDivisionError, ValueError):
            return PENALTY
        return value if np.isfinite(value) else PENALTY
    return objective


def _start(model: ModelSpec, data: np.ndarray, fixed: dict,
           objective, coords: _Coords) -> tuple[dict, dict]:
    try:
        theta = clip_theta(model, {**model.mom_init(data, fixed),
                **fixed})
        return theta, {"source": "moments"}
    except FitError as e:
        if model.guesses is None: raise
        reason = str(e)

    best, best_value = None, math.inf
    for guess in model.guesses(data, fixed):
        theta = clip_theta(model, {**guess, **fixed})
        value = objective(coords.to_x(theta))
        if value < best_value: best, best_value = theta, value
    if best is None:
        raise FitError(f"no usable start for {model.tag}: {reason}")
    return best, {"source": "guesses", "reason": reason}


def ecf_fit(model: str | ModelSpec, data, cfg: ECFConfig | None =
            None, fixed: dict | None = None, seed: int = SEED,
            fft: FFTConfig | None = None, loglik: bool = True
           ) -> FitResult:
    """
    Minimize the ECF distance from the method-of-moments start and
    `cfg.restarts` jittered copies of it.

    Each start runs a bounded Nelder-Mead simplex in search
    coordinates (log for scale and shape parameters, the loadings
    in [-10, 10]). Start k draws its jitter from child k of
    SeedSequence(seed), so the result does not depend on the
    thread schedule.

    Args:
        model: Tag or ModelSpec
        data: Sample
        cfg (ECFConfig): Grid, weight and budget
        fixed (dict): Values held fixed; merged over the model's
                      gauge, a None value frees a gauge entry
        seed (int): Master seed
        fft (FFTConfig): Grid for the log-likelihood
        loglik (bool): Compute the FFT log-likelihood

    Returns:
        FitResult: The best start by objective

    Raises:
        FitError: no start available
    """
    model  = _model(model)
    cfg    = cfg or ECFConfig()
    data   = _clean(data, model.support)
    fixed  = _fixed(model, fixed)
    coords = _Coords(model, fixed)
    ecf    = EmpiricalCF.from_data(data, cfg)
    f      = _penalized(model, coords, ecf)

    theta0, init = _start(model, data, fixed, f, coords)
    x0           = coords.to_x(theta0)
    init.update(theta=theta0, objective=f(x0))

    if not coords.free:
        return _finish(model, data, fixed, theta0, init["objective"],
               init, "converged", 1, 1, fft, loglik)

    children = np.random.SeedSequence(seed).spawn(cfg.restarts)
    starts   = [x0] + [coords.jitter(x0, np.random.default_rng(c))
               for c in children]
    options  = {"maxfev": cfg.max_evals, "xatol": 1e-8,
               "fatol": cfg.tolerance, "adaptive": x0.size > 2}

    def run(x: np.ndarray):
        return minimize(f, x, method="Nelder-Mead",
               bounds=coords.bounds, options=options)

    if cfg.workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run, starts))
    else: results = [run(x) for x in starts]

    k    = min(range(len(results)), key=lambda i: (results[i].fun, i))
    best = results[k]
    if best.fun >= PENALTY: status = "failed"
    elif best.success: status = "converged"
    else: status = "budget-exhausted"

    theta = coords.to_theta(best.x)
    evals = int(sum(r.nfev for r in results))
    return _finish(model, data, fixed, theta, float(best.fun), init,
           status, evals, len(starts), fft, loglik)


def _finish(model, data, fixed, theta, objective, init, status,
            evals, starts, fft, loglik) -> FitResult:
    value = None
    if loglik and status != "failed":
        value = loglik_fft(model.law(theta).chf, data, fft)
    weak = model.weak_names(theta, fixed)
    if weak and status != "failed":
        warn(f"{model.tag}: {', '.join(weak)} barely identified at "
           + "the fitted point; a clock level is close to a drift",
           IdentificationWarning)
    return FitResult(model.tag, theta, objective, value, init, status,
           sorted(fixed), evals, starts, weak)


def fit_model(model: str | ModelSpec, data, cfg: ECFConfig | None =
              None, fixed: dict | None = None, seed: int = SEED,
              fft: FFTConfig | None = None, loglik: bool = True
             ) -> FitResult:
    """
    Closed-form estimator when the model has one and nothing
    beyond its gauge is fixed, the ECF search otherwise.
    """
    model = _model(model)
    if model.direct is None or fixed:
        return ecf_fit(model, data, cfg, fixed, seed, fft, loglik)

    data  = _clean(data, model.support)
    theta = model.direct(data)
    value = ecf_objective(model.law, data, cfg, theta=theta)
    init  = {"source": "closed-form", "theta": theta,
             "objective": value}
    return _finish(model, data, {}, theta, value, init, "converged",
           1, 1, fft, loglik)


# ====================== LIKELIHOOD =========================
def covering_grid(chf, data=None, cfg: FFTConfig | None = None
                 ) -> DensityGrid:
    """
    FFT density whose grid covers the bulk of `data`: the span is
    the larger of 12 chf-curvature standard deviations and 1.1x
    the reach of the 0.02%..99.98% sample quantiles, never more
    than the full data reach plus a margin.
    """
    cfg = cfg or FFTConfig()
    if data is None or (cfg.center is not None and cfg.x_span
            is not None):
        return chf_to_pdf_fft(chf, cfg)

    data = np.asarray(data, dtype=float)
    try:
        mean, sd   = moment_span(chf)
        base, span = mean, 12 * sd
    except GridError:
        base, span = float(np.median(data)), 0.0

    center = base if cfg.center is None else cfg.center
    if cfg.x_span is None:
        lo, hi = np.quantile(data, [2e-4, 1 - 2e-4])
        bulk   = 1.1 * max(abs(lo - center), abs(hi - center))
        full   = np.max(np.abs(data - center)) * (1 + 12.0
               / cfg.grid_size)
        span   = max(span, min(bulk, full) if bulk > 0 else full)
        if span <= 0: span = 1.0
    else: span = cfg.x_span
    return chf_to_pdf_fft(chf, replace(cfg, center=center,
           x_span=span))


def loglik_fft(chf, data, cfg: FFTConfig | None = None,
               grid: DensityGrid | None = None) -> float:
    """
    sum ln pdf(x_i), pdf from FFT inversion with linear
    interpolation. Points off the grid get the 1e-300 floor.

    Raises:
        GridError: more than 0.1% of the points off the grid
    """
    data = _clean(data)
    grid = grid or covering_grid(chf, data, cfg)
    off  = (data < grid.x0) | (data > grid.x_max)
    frac = float(np.mean(off))
    if frac > 1e-3:
        raise GridError(f"{frac:.2%} of the data fall outside the "
                      + "density grid; widen x_span")
    if frac:
        warn(f"{int(off.sum())} point(s) outside the density grid "
             + "scored at the floor density", CoverageWarning)
    pdf = np.maximum(grid.pdf(data), DENSITY_FLOOR)
    return float(np.sum(np.log(pdf)))


# ========================= HELPERS =========================
def _model(model: str | ModelSpec) -> ModelSpec:
    return model if isinstance(model, ModelSpec) else get_model(model)


def _fixed(model: ModelSpec, fixed: dict | None) -> dict:
    merged = {**model.gauge, **(fixed or {})}
    merged = {k: float(v) for k, v in merged.items() if v is not None}
    return model.check_fixed(merged)


def _clean(data, support: str = "real") -> np.ndarray:
    data = np.asarray(data, dtype=float).ravel()
    require(data.size > 0, "no data", DataError)
    require(bool(np.all(np.isfinite(data))), "data contain non-finite "
            + "values", DataError)
    if support == "positive":
        require(bool(np.all(data > 0)), "this model needs positive "
                + "data", DataError)
    return data
