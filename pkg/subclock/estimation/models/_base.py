# ========================= STANDARDS =======================
from dataclasses import dataclass, field
from typing import Callable
import math

# ======================= THIRD-PARTIES =====================
from scipy import stats
import numpy as np

# ========================== LOCALS =========================
from subclock.constants import POS_BOUNDS, LOAD_BOUNDS, WEAK_SHARE
from subclock.errors import ConfigError, require


@dataclass(frozen=True)
class ModelSpec:
    """
    One fit family.

    Attributes:
        tag (str): Registry name (normal, ig, cig, ...)
        names (tuple): Parameter names in report order
        positive (tuple): Names living on (0, inf), searched in
                          log coordinates
        gauge (dict): Default fixed values pinning directions the
                      data cannot identify
        build (Callable): theta dict -> law with chf, pdf_grid,
                          sample and moments
        mom_init (Callable): (data, fixed) -> theta dict
        support (str): real | positive, the data the law lives on
        direct (Callable | None): closed-form estimator replacing
                                  the ECF search
        guesses (Callable | None): (data, fixed) -> list of
                                   heuristic starts used when
                                   moment matching fails
        weak (Callable | None): theta -> names the data pin only
                                in combination at that point
        summary (str): One line for listings
    """
    tag:      str
    names:    tuple
    positive: tuple
    build:    Callable
    mom_init: Callable
    gauge:    dict          = field(default_factory=dict)
    support:  str           = "real"
    direct:   Callable|None = None
    guesses:  Callable|None = None
    weak:     Callable|None = None
    summary:  str           = ""

    def bounds(self, name: str) -> tuple[float, float]:
        return POS_BOUNDS if name in self.positive else LOAD_BOUNDS

    def check_fixed(self, fixed: dict) -> dict:
        unknown = set(fixed) - set(self.names)
        if unknown:
            raise ConfigError(f"{self.tag} has no parameter(s) "
                + f"{', '.join(sorted(unknown))}; known: "
                + ", ".join(self.names))
        for name, value in fixed.items():
            lo, hi = self.bounds(name)
            if not lo <= value <= hi:
                raise ConfigError(f"fixed {name}={value} outside "
                                + f"[{lo:g}, {hi:g}]")
        return dict(fixed)

    def law(self, theta: dict):
        missing = [n for n in self.names if n not in theta]
        require(not missing, f"{self.tag} misses {missing}")
        return self.build({n: float(theta[n]) for n in self.names})

    def weak_names(self, theta: dict, fixed=()) -> list:
        if self.weak is None: return []
        return [n for n in self.weak(theta) if n not in fixed]


# ======================= MOMENT TOOLS ======================
def data_moments(data: np.ndarray) -> tuple[float, float, float,
                                             float]:
    """Mean, variance, skewness and excess kurtosis (biased)."""
    data = np.asarray(data, dtype=float)
    return (float(np.mean(data)), float(np.var(data, ddof=1)),
            float(stats.skew(data)), float(stats.kurtosis(data)))


def skew_is_zero(skew: float, n: int) -> bool:
    """Within two standard errors of 0 under normality."""
    return abs(skew) < 2 * math.sqrt(6.0 / max(n, 1))


def clip_theta(model: ModelSpec, theta: dict) -> dict:
    out = {}
    for name, value in theta.items():
        lo, hi    = model.bounds(name)
        out[name] = float(min(max(value, lo), hi))
    return out


def robust_scale(data: np.ndarray) -> float:
    q1, q3 = np.percentile(data, [25, 75])
    return float(q3 - q1) / 1.349 or float(np.std(data)) or 1.0


def weak_clocks(cv2_T: float, cv2_U: float, outer: tuple,
                inner: tuple) -> list:
    """
    Squared coefficients of variation of T over one mean U step
    and of U(1) split the clock noise between the levels. A level
    holding less than WEAK_SHARE of it is close to a drift, and
    the names tied to it (outer for T, inner for U) are reported.
    """
    total = cv2_T + cv2_U
    if not math.isfinite(total) or total <= 0: return []
    names = []
    if cv2_T / total < WEAK_SHARE: names += outer
    if cv2_U / total < WEAK_SHARE: names += inner
    return names
