"""
Density-forecast checks: probability integral transform (PIT),
Kolmogorov-Smirnov and Kuiper uniformity tests, the
inverse-normal transform and the small-sample adjusted
Jarque-Bera normality test.
"""
# ========================= STANDARDS =======================
from dataclasses import dataclass, asdict
import math

# ======================= THIRD-PARTIES =====================
from scipy import special, stats
import numpy as np

# ========================== LOCALS =========================
from .behavioral import as_cdf
from .errors import DomainError, require, warn
from .constants import PIT_CLAMP


@dataclass(frozen=True)
class TestResult:
    __test__ = False

    statistic: float
    p_value:   float
    n:         int
    method:    str

    def __post_init__(self):
        require(0 <= self.p_value <= 1, f"p-value {self.p_value} "
                + "outside [0, 1]")

    def passed(self, level: float = 0.05) -> bool:
        return self.p_value > level

    def to_dict(self) -> dict:
        return asdict(self)


def _uniforms(u, minimum: int) -> np.ndarray:
    u = np.asarray(u, dtype=float).ravel()
    require(u.size >= minimum, f"need at least {minimum} values, got "
            + f"{u.size}")
    require(bool(np.all((u >= 0) & (u <= 1))), "values must lie in "
            + "[0, 1]")
    return np.sort(u)


def _clamp(u: np.ndarray, what: str) -> np.ndarray:
    out = np.clip(u, PIT_CLAMP, 1 - PIT_CLAMP)
    hit = int(np.sum(out != u))
    if hit: warn(f"{what}: {hit} value(s) clamped to [{PIT_CLAMP:g}, "
                 + f"1-{PIT_CLAMP:g}]")
    return out


# =========================== PIT ===========================
def pit(cdf, data) -> np.ndarray:
    """
    u_i = F(x_i), clamped into (0, 1).

    Args:
        cdf: Callable CDF, DensityGrid or law with `pdf_grid`
        data: Observations

    Raises:
        DomainError: the CDF is flat across the whole data range
    """
    fn, _ = as_cdf(cdf)
    data  = np.asarray(data, dtype=float).ravel()
    require(data.size > 0, "pit needs data")
    u     = np.asarray(fn(data), dtype=float)
    require(bool(np.all(np.isfinite(u))), "cdf returned non-finite "
            + "values")
    if data.size > 1 and np.ptp(data) > 0 and np.ptp(u) == 0:
        raise DomainError("cdf is constant over the data range")
    return _clamp(u, "pit")


# ======================== UNIFORMITY =======================
def _d_plus_minus(u: np.ndarray) -> tuple[float, float]:
    n = u.size
    i = np.arange(1, n + 1)
    return float(np.max(i / n - u)), float(np.max(u - (i - 1) / n))


def ks_uniform_test(u) -> TestResult:
    """
    D = sup |F_n(u) - u| with the asymptotic Kolmogorov p-value
    at sqrt(n) D.
    """
    u      = _uniforms(u, 5)
    dp, dm = _d_plus_minus(u)
    d      = max(dp, dm)
    p      = float(special.kolmogorov(math.sqrt(u.size) * d))
    return TestResult(d, min(1.0, max(0.0, p)), u.size, "ks")


def kuiper_sf(lam: float) -> float:
    """Asymptotic Kuiper tail 2 sum (4 j^2 l^2 - 1) exp(-2 j^2 l^2)."""
    if lam < 0.4: return 1.0
    total = 0.0
    for j in range(1, 101):
        a     = 2 * j * j * lam * lam
        term  = (2 * a - 1) * math.exp(-a)
        total += term
        if abs(term) <= 1e-12 * abs(total): break
    return min(1.0, max(0.0, 2 * total))


def kuiper_test(u) -> TestResult:
    """
    V = D+ + D-, p-value from the asymptotic series at
    (sqrt(n) + 0.155 + 0.24/sqrt(n)) V.
    """
    u      = _uniforms(u, 5)
    dp, dm = _d_plus_minus(u)
    v      = dp + dm
    root   = math.sqrt(u.size)
    p      = kuiper_sf((root + 0.155 + 0.24 / root) * v)
    return TestResult(v, p, u.size, "kuiper")


# ======================== NORMALITY ========================
def inverse_normal_transform(u) -> np.ndarray:
    """z_i = Phi^{-1}(u_i); values at 0 or 1 are clamped first."""
    u = np.asarray(u, dtype=float)
    require(bool(np.all((u >= 0) & (u <= 1))), "values must lie in "
            + "[0, 1]")
    return special.ndtri(_clamp(u, "inverse-normal"))


berkowitz_transform = inverse_normal_transform


def adjusted_jarque_bera(z) -> TestResult:
    """
    Jarque-Bera with the exact finite-n mean and variances of
    sample skewness and kurtosis under normality:

        AJB = S^2 / var(S) + (K - E K)^2 / var(K)
        var(S) = 6 (n-2) / ((n+1)(n+3))
        E K    = 3 (n-1) / (n+1)
        var(K) = 24 n (n-2)(n-3) / ((n+1)^2 (n+3)(n+5))

    and a chi-square(2) p-value.
    """
    z = np.asarray(z, dtype=float).ravel()
    require(z.size >= 8, f"need at least 8 values, got {z.size}")
    n  = z.size
    d  = z - z.mean()
    m2 = float(np.mean(d ** 2))
    require(m2 > 0, "constant sample")
    s  = float(np.mean(d ** 3)) / m2 ** 1.5
    k  = float(np.mean(d ** 4)) / m2 ** 2

    var_s  = 6 * (n - 2) / ((n + 1) * (n + 3))
    mean_k = 3 * (n - 1) / (n + 1)
    var_k  = 24 * n * (n - 2) * (n - 3) / ((n + 1) ** 2 * (n + 3)
           * (n + 5))
    stat   = s * s / var_s + (k - mean_k) ** 2 / var_k
    return TestResult(stat, float(stats.chi2.sf(stat, 2)), n,
           "adjusted-jb")


def run_diagnostics(cdf, data) -> dict[str, TestResult]:
    """PIT, then KS and Kuiper on it and adjusted JB on its normal scores."""
    u = pit(cdf, data)
    z = inverse_normal_transform(u)
    return {"ks": ks_uniform_test(u), "kuiper": kuiper_test(u),
            "adjusted_jb": adjusted_jarque_bera(z)}
