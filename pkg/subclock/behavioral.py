"""
Probability weighting functions: Tversky-Kahneman, Prelec, the
Gumbel CDF and the general transform w(u) = F_S(F_R^{-1}(u))
carrying one return law's CDF onto another's.
"""
# ========================= STANDARDS =======================
from dataclasses import dataclass
from typing import Callable
import math

# ======================= THIRD-PARTIES =====================
from scipy import optimize
import numpy as np

# ========================== LOCALS =========================
from .numerics import DensityGrid, FFTConfig
from .errors import DomainError, InversionError, require
from .laws.subordinators import _scalar


PWF_FAMILIES = ["TK", "Prelec", "General"]


def _unit(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(u)) or np.any(u < 0) or np.any(u > 1):
        raise DomainError("u must lie in [0, 1]")
    return u


def tk_pwf(gamma: float, u):
    """u^g / (u^g + (1 - u)^g)^(1/g); g = 0 is the limit 0 inside."""
    require(0 <= gamma <= 1, f"gamma must lie in [0, 1], got {gamma}")
    u   = _unit(u)
    out = np.zeros(u.shape)
    mid = (u > 0) & (u < 1)
    if gamma > 0:
        um       = u[mid]
        log_w    = gamma * np.log(um) - np.log(um ** gamma + (1 - um)
                   ** gamma) / gamma
        out[mid] = np.exp(log_w)
    out[u == 1] = 1.0
    return _scalar(out)


def prelec_pwf(delta: float, rho: float, u):
    """
    exp(-delta (-ln u)^rho). The conventional reading: the literal
    exp(-delta ln u)^rho grows without bound as u -> 0 and is not
    a weighting function.
    """
    require(delta > 0, f"delta must be > 0, got {delta}")
    require(0 < rho < 1, f"rho must lie in (0, 1), got {rho}")
    u   = _unit(u)
    out = np.zeros(u.shape)
    pos = u > 0
    out[pos] = np.exp(-delta * (-np.log(u[pos])) ** rho)
    return _scalar(out)


def gumbel_cdf(mu: float, beta: float, x):
    require(beta > 0, f"beta must be > 0, got {beta}")
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return _scalar(np.exp(-np.exp(-(x - mu) / beta)))


# ========================= GENERAL =========================
def as_cdf(handle) -> tuple[Callable, DensityGrid | None]:
    """
    Normalize a CDF handle: a DensityGrid, anything with a
    `pdf_grid` method (a ReturnLaw) or a plain callable.
    """
    if isinstance(handle, DensityGrid): return handle.cdf_at, handle
    if hasattr(handle, "pdf_grid"):
        grid = handle.pdf_grid(FFTConfig())
        return grid.cdf_at, grid
    require(callable(handle), "a CDF handle must be callable or a "
            + "DensityGrid")
    return handle, None


def _bracket(cdf: Callable, grid: DensityGrid | None, u: float
            ) -> tuple[float, float]:
    if grid is not None:
        k = int(np.searchsorted(grid.cdf, u, side="right"))
        if 0 < k < grid.cdf.size:
            x = grid.x0 + grid.dx * np.array([k - 1, k])
            return float(x[0]), float(x[1])
        raise InversionError(f"u={u:.6g} is outside the tabulated "
                           + "CDF range")

    lo, hi = -1.0, 1.0
    while cdf(lo) > u:
        lo *= 2
        if lo < -1e12: raise InversionError("cannot bracket the "
                             + f"lower side for u={u:.6g}")
    while cdf(hi) <= u:
        hi *= 2
        if hi > 1e12: raise InversionError("cannot bracket the "
                            + f"upper side for u={u:.6g}")
    return lo, hi


def invert_cdf(cdf: Callable, u: float, grid: DensityGrid | None =
               None, xtol: float = 1e-10) -> float:
    """
    min{x : F(x) > u} by bisection inside a bracket taken from the
    grid nodes, or found by doubling when no grid is known.

    Raises:
        InversionError: no bracket confines the root
    """
    require(0 < u < 1, f"u must lie in (0, 1), got {u}")
    lo, hi = _bracket(cdf, grid, u)
    f      = lambda x: float(cdf(x)) - u
    if f(lo) > 0 or f(hi) < 0:
        raise InversionError(f"bracket [{lo:.6g}, {hi:.6g}] does not "
                           + f"confine F^-1({u:.6g})")
    return optimize.bisect(f, lo, hi, xtol=xtol, maxiter=400)


def general_pwf(cdf_r, cdf_s, u, xtol: float = 1e-10):
    """
    w(u) = F_S(F_R^{-1}(u)) for u in (0, 1).

    Args:
        cdf_r: Reference CDF handle (DensityGrid, law or callable)
        cdf_s: Target CDF handle
        u: Levels in (0, 1)

    Returns:
        Weighted probabilities, same shape as u
    """
    fr, grid_r = as_cdf(cdf_r)
    fs, _      = as_cdf(cdf_s)
    u   = np.asarray(u, dtype=float)
    if np.any(u <= 0) or np.any(u >= 1):
        raise DomainError("general_pwf needs u in (0, 1)")
    out = np.array([float(fs(invert_cdf(fr, float(level), grid_r,
          xtol))) for level in u.ravel()]).reshape(u.shape)
    return _scalar(out)


@dataclass(frozen=True)
class PWFSpec:
    """
    A weighting function ready to evaluate.

    Attributes:
        family (str): TK | Prelec | General
        gamma (float): TK curvature in [0, 1]
        delta, rho (float): Prelec parameters
        cdf_r, cdf_s: CDF handles of the General transform
    """
    family: str
    gamma:  float | None = None
    delta:  float | None = None
    rho:    float | None = None
    cdf_r:  object       = None
    cdf_s:  object       = None

    def __post_init__(self):
        require(self.family in PWF_FAMILIES, "family must be one of "
                + f"{PWF_FAMILIES}, got {self.family}")
        if self.family == "TK":
            require(self.gamma is not None and 0 <= self.gamma <= 1,
                    "TK needs gamma in [0, 1]")
        elif self.family == "Prelec":
            require(self.delta is not None and self.delta > 0,
                    "Prelec needs delta > 0")
            require(self.rho is not None and 0 < self.rho < 1,
                    "Prelec needs rho in (0, 1)")
        else:
            require(self.cdf_r is not None and self.cdf_s is not None,
                    "General needs two CDF handles")

    def __call__(self, u):
        if self.family == "TK": return tk_pwf(self.gamma, u)
        if self.family == "Prelec":
            return prelec_pwf(self.delta, self.rho, u)
        return general_pwf(self.cdf_r, self.cdf_s, u)

    def is_weighting(self, n: int = 1001) -> bool:
        """Maps a u-grid into [0, 1] nondecreasingly."""
        u = np.linspace(0.0, 1.0, n)
        if self.family == "General": u = u[1:-1]
        w = np.asarray(self(u))
        return bool(np.all((w >= 0) & (w <= 1)) and np.all(np.diff(w)
               >= -1e-12) and (self.family == "General" or
               math.isclose(w[0], 0) and math.isclose(w[-1], 1)))
