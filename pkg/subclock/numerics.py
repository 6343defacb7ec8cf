"""
Shared numerical kernels: characteristic-function inversion by
FFT, tabulated CDFs, adaptive quadrature, Bessel K and Gaussian
kernel density estimation.
"""
# ========================= STANDARDS =======================
from dataclasses import dataclass, field
from typing import Callable
import math

# ======================= THIRD-PARTIES =====================
from scipy import integrate, special, stats
import numpy as np

# ========================== LOCALS =========================
from .errors import DomainError, GridError, QuadratureError
from .errors import NumericalError, require
from .constants import GRID_SIZE


# ======================== TRANSFORMS =======================
@dataclass(frozen=True)
class Transform:
    """
    An evaluable transform of a law: characteristic function,
    Laplace transform or moment-generating function.

    Attributes:
        fn (Callable): Vectorized evaluator
        kind (str): chf | laplace | mgf
        domain (tuple): Open real interval the argument must lie
                        in (ignored for chf, valid on all reals)
    """
    fn:     Callable[[np.ndarray], np.ndarray]
    kind:   str   = "chf"
    domain: tuple = (-math.inf, math.inf)

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        if self.kind != "chf":
            lo, hi = self.domain
            if np.any(v <= lo) or np.any(v >= hi):
                raise DomainError(f"{self.kind} argument outside "
                                + f"({lo:.6g}, {hi:.6g})")
        return self.fn(v)


def sweeps(v: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """
    Index orders walking a 1-D grid outward from the point
    closest to 0, one for each side.
    """
    v = np.asarray(v)
    if v.ndim != 1 or v.size < 2: return None
    order = np.argsort(v, kind="stable")
    start = np.searchsorted(v[order], 0.0)
    right = order[start:]
    left  = order[:start][::-1]
    return right, left


def tracked_sqrt(w: np.ndarray, sweep=None) -> np.ndarray:
    """
    Principal complex square root made continuous along a grid
    sweep: a root is negated whenever it lands closer to minus
    its predecessor than to the predecessor itself.
    """
    root = np.sqrt(np.asarray(w, dtype=complex))
    if sweep is None: return root
    for idx in sweep:
        if idx.size < 2: continue
        r    = root[idx]
        jump = np.abs(r[1:] - r[:-1]) > np.abs(r[1:] + r[:-1])
        sign = np.cumprod(np.where(jump, -1.0, 1.0))
        root[idx[1:]] = r[1:] * sign
    return root


def tracked_log(w: np.ndarray, sweep=None) -> np.ndarray:
    """Complex logarithm with the argument unwrapped along a sweep."""
    w   = np.asarray(w, dtype=complex)
    out = np.log(w)
    if sweep is None: return out
    for idx in sweep:
        if idx.size < 2: continue
        out[idx] = np.log(np.abs(w[idx])) \
                 + 1j * np.unwrap(np.angle(w[idx]))
    return out


# ========================== FFT ============================
@dataclass(frozen=True)
class FFTConfig:
    """
    Grid for discrete Fourier inversion.

    Attributes:
        grid_size (int): Power of two, at least 2**8
        x_span (float | None): Support half-width; None estimates
                               12 standard deviations from the
                               chf curvature at 0
        damping (float): eta in exp(-eta |v|), 0 disables it
        center (float | None): Grid midpoint; None uses the mean
                               estimated from the chf
    """
    grid_size: int          = GRID_SIZE
    x_span:    float | None = None
    damping:   float        = 0.0
    center:    float | None = None

    def __post_init__(self):
        n = self.grid_size
        require(isinstance(n, int) and n >= 2 ** 8 and n & (n - 1)
                == 0, f"grid_size must be a power of two >= 256, "
                + f"got {n}")
        require(self.x_span is None or self.x_span > 0,
                "x_span must be positive")
        require(self.damping >= 0, "damping must be >= 0")


@dataclass(frozen=True)
class DensityGrid:
    """
    Density tabulated on a uniform grid.

    Values are linearly interpolated between nodes and vanish
    outside [x0, x0 + (n-1) dx]. `renorm` is the mass found
    after clipping negative ripple, `clipped` the clipped mass.
    """
    x0:      float
    dx:      float
    values:  np.ndarray
    cdf:     np.ndarray
    renorm:  float = 1.0
    clipped: float = 0.0

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.values.size)

    @property
    def x_max(self) -> float:
        return self.x0 + self.dx * (self.values.size - 1)

    def pdf(self, x) -> np.ndarray:
        return np.interp(x, self.x, self.values, left=0.0,
               right=0.0)

    def cdf_at(self, x) -> np.ndarray:
        return cdf_interp(self, x)

    def quantile(self, u) -> np.ndarray:
        return cdf_inv(self, u)

    def mass(self) -> float:
        return float(np.sum(self.values) * self.dx)


def moment_span(chf: Callable, h: float = 1e-3, iters: int = 12
               ) -> tuple[float, float]:
    """
    Mean and standard deviation read off the curvature of
    ln chf at 0 by central differences, refining the step until
    it sits at 1% of a standard deviation.

    Raises:
        GridError: when the curvature does not settle (laws
                   without a variance need an explicit x_span)
    """
    sd, settled = None, False
    for _ in range(iters):
        with np.errstate(divide="ignore", invalid="ignore"):
            lp, lm = np.log(np.asarray(chf(np.array([h, -h])),
                     dtype=complex))
        var = -(lp.real + lm.real) / h ** 2
        if not np.isfinite(var) or var <= 0:
            if sd is not None or h < 1e-12: break
            h *= 1e-3; continue
        new = math.sqrt(var)
        if sd is not None and abs(new / sd - 1) < 1e-3:
            sd, settled = new, True; break
        sd, h = new, 1e-2 / new

    if not settled:
        raise GridError("cannot estimate a span from the chf; set "
                      + "x_span explicitly")
    lp, lm = np.log(chf(np.array([h, -h])).astype(complex))
    mean   = (lp.imag - lm.imag) / (2 * h)
    return float(mean), float(sd)


def chf_to_pdf_fft(chf: Callable, cfg: FFTConfig | None = None
                  ) -> DensityGrid:
    """
    Recover a density from its characteristic function.

    Evaluates f(x) = (1/pi) Re int_0^inf e^{-ivx} chf(v) dv with
    trapezoid weights on a frequency grid dual to the x-grid and
    sums it with one FFT. Negative ripple is clipped and the
    density renormalized.

    Args:
        chf (Callable): Vectorized characteristic function
        cfg (FFTConfig): Grid settings

    Returns:
        DensityGrid: Tabulated density and CDF

    Raises:
        GridError: clipped mass above 1e-3 or total mass off by
                   more than 1e-2
    """
    cfg          = cfg or FFTConfig()
    center, span = cfg.center, cfg.x_span
    if center is None or span is None:
        mean, sd = moment_span(chf)
        if center is None: center = mean
        if span is None: span = 12.0 * sd

    n  = cfg.grid_size
    dx = 2.0 * span / n
    x0 = center - span
    dv = 2.0 * math.pi / (n * dx)
    v  = dv * np.arange(n)

    phi = np.asarray(chf(v), dtype=complex)
    if cfg.damping: phi = phi * np.exp(-cfg.damping * v)
    if not np.all(np.isfinite(phi)):
        raise GridError("chf is not finite on the frequency grid")

    weights    = np.ones(n)
    weights[0] = 0.5
    values     = (dv / math.pi) * np.real(
                 np.fft.fft(weights * phi * np.exp(-1j * v * x0)))

    clipped = float(-np.sum(values[values < 0]) * dx)
    values  = np.clip(values, 0.0, None)
    mass    = float(np.sum(values) * dx)
    if clipped > 1e-3:
        raise GridError(f"clipped negative mass {clipped:.3g} "
                      + "exceeds 1e-3; widen or refine the grid")
    if not mass or abs(mass - 1.0) > 1e-2:
        raise GridError(f"density mass {mass:.6g} deviates from 1 "
                      + "by more than 1e-2")

    values = values / mass
    cdf    = np.concatenate(([0.0], np.cumsum(0.5 * (values[1:]
           + values[:-1]) * dx)))
    if cdf[-1] > 0: cdf = cdf / cdf[-1]
    return DensityGrid(x0, dx, values, cdf, mass, clipped)


def cdf_interp(grid: DensityGrid, x) -> np.ndarray:
    return np.interp(x, grid.x, grid.cdf, left=0.0, right=1.0)


def cdf_inv(grid: DensityGrid, u) -> np.ndarray:
    """
    Generalized inverse min{x : F(x) > u} of the piecewise-linear
    tabulated CDF, located by binary search over the nodes.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0) or np.any(u >= 1):
        raise DomainError("quantile level must lie in (0, 1)")
    cdf = grid.cdf
    idx = np.clip(np.searchsorted(cdf, u, side="right"), 1,
          cdf.size - 1)
    lo, hi = cdf[idx - 1], cdf[idx]
    width  = np.where(hi > lo, hi - lo, 1.0)
    frac   = np.clip((u - lo) / width, 0.0, 1.0)
    return grid.x0 + grid.dx * (idx - 1 + frac)


# ======================== QUADRATURE =======================
@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evals: int = 0
    extra: dict = field(default_factory=dict)


def adaptive_quad(f: Callable[[float], float], a: float, b: float,
                  tol: float = 1e-10, rtol: float = 1e-8,
                  log_scale: bool = False, points=None,
                  limit: int = 200) -> QuadResult:
    """
    Adaptive Gauss-Kronrod quadrature (QUADPACK) of f over (a, b).

    Args:
        f (Callable): Scalar integrand
        a, b (float): Limits, either may be infinite
        tol, rtol (float): Absolute and relative tolerances
        log_scale (bool): Integrate in w = ln x, for integrands
                          on (0, b) peaked over several decades
        points (list): Break points (finite limits only)

    Returns:
        QuadResult: value and error estimate

    Raises:
        QuadratureError: when the error estimate misses both
                         tolerances; reports the worst
                         subinterval when QUADPACK exposes it
    """
    if log_scale:
        require(a >= 0, "log-scale quadrature needs a >= 0")
        g      = lambda w: f(math.exp(w)) * math.exp(w)
        a      = -math.inf if a == 0 else math.log(a)
        b      = math.log(b) if math.isfinite(b) else math.inf
        points = None if points is None else [math.log(p)
                 for p in points if p > 0]
    else: g = f

    kwargs = dict(epsabs=tol, epsrel=rtol, limit=limit,
             full_output=1)
    if points is not None and math.isfinite(a) and math.isfinite(b):
        kwargs["points"] = points

    out         = integrate.quad(g, a, b, **kwargs)
    value, err  = out[0], out[1]
    info        = out[2] if len(out) > 2 else {}
    evals       = int(info.get("neval", 0))
    if not np.isfinite(value) or err > max(tol, rtol * abs(value)) \
        * 10:
        where = None
        if "elist" in info and info.get("last", 0):
            k     = int(np.argmax(info["elist"][:info["last"]]))
            where = (float(info["alist"][k]), float(info["blist"][k]))
        message = out[3] if len(out) > 3 else "tolerance not met"
        raise QuadratureError(f"quadrature failed on ({a}, {b}): "
              + f"value {value:.6g} +- {err:.3g}; {message}", value,
              err, where)
    return QuadResult(float(value), float(err), evals)


# ========================== BESSEL =========================
def bessel_k1(x) -> np.ndarray:
    """
    Modified Bessel function of the second kind, order 1.

    Raises:
        DomainError: x <= 0
        NumericalError: x so small that K1 ~ 1/x overflows
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0): raise DomainError("bessel_k1 needs x > 0")
    if np.any(x < 1e-300):
        raise NumericalError("bessel_k1 overflows for x < 1e-300")
    return special.k1(x)


def log_bessel_kv(nu: float, x) -> np.ndarray:
    """ln K_nu(x) through the exponentially scaled kve."""
    x = np.asarray(x, dtype=float)
    return np.log(special.kve(nu, x)) - x


# ============================ KDE ==========================
def normal_reference_bandwidth(data) -> float:
    data = np.asarray(data, dtype=float)
    if data.size < 2: return 0.0
    return 1.06 * float(np.std(data, ddof=1)) * data.size ** -0.2


def kde(data, x, bandwidth: float | None = None) -> np.ndarray:
    """
    Gaussian kernel density estimate (1/nh) sum k((x_i - x)/h).

    Args:
        data: Sample
        x: Evaluation points
        bandwidth (float): h; defaults to 1.06 sd n^(-1/5)

    Returns:
        np.ndarray: Density estimates at x
    """
    data = np.asarray(data, dtype=float).ravel()
    require(data.size > 0, "kde needs data")
    h = normal_reference_bandwidth(data) if bandwidth is None \
        else float(bandwidth)
    require(h > 0, "kde bandwidth must be positive")

    x     = np.asarray(x, dtype=float)
    flat  = x.ravel()
    out   = np.empty(flat.size)
    block = max(1, (1 << 22) // data.size)
    for i in range(0, flat.size, block):
        part = flat[i:i + block]
        z    = (data[None, :] - part[:, None]) / h
        out[i:i + block] = stats.norm.pdf(z).sum(axis=1)
    return (out / (data.size * h)).reshape(x.shape)
