"""
Compound inverse Gaussian law V(1) = T(U(1)) for a squared
volatility index. The time-change gauge (T(c .), U/c) is pinned
by fixing mu_T.
"""
# ========================= STANDARDS =======================
import math

# ========================== LOCALS =========================
from subclock.laws.subordinators import IGParams
from subclock.laws.compound import CompoundChain
from subclock.errors import FitError
from ._base import ModelSpec, data_moments, weak_clocks


SHARES = (0.001, 0.01, 0.1, 0.5, 0.9)


def _theta(mean: float, var: float, share: float, mu_T: float) -> dict:
    # share is the part of the variance carried by T's own noise
    mu_U = mean / mu_T
    return {"mu_U":     mu_U,
            "lambda_U": mu_U ** 3 * mu_T ** 2 / ((1 - share) * var),
            "mu_T":     mu_T,
            "lambda_T": mu_U * mu_T ** 3 / (share * var)}


def mom_init(data, fixed: dict) -> dict:
    """
    Matches mean, variance and third cumulant. With mu_T given,
    the mean fixes mu_U and the variance splits into a U part
    (1 - s) and a T part s; the third cumulant is then
    3 var^2/mean (1 - s + s^2), solved for the smaller root s.
    Ratios up to 5% outside [0.75, 1] are clamped to the edge.
    """
    mean, var, skew, _ = data_moments(data)
    if mean <= 0 or var <= 0:
        raise FitError("CIG needs positive mean and variance")
    mu_T  = fixed.get("mu_T", 1.0)
    ratio = skew * var ** 1.5 * mean / (3 * var ** 2)
    if not 0.75 * 0.95 <= ratio <= 1.05:
        raise FitError(f"skewness ratio {ratio:.4g} outside the CIG "
                     + "region [0.75, 1]")
    ratio = min(max(ratio, 0.75), 1 - 1e-6)
    share = (1 - math.sqrt(max(0.0, 1 - 4 * (1 - ratio)))) / 2
    return _theta(mean, var, max(share, 1e-9), mu_T)


def guesses(data, fixed: dict) -> list[dict]:
    mean, var, _, _ = data_moments(data)
    mu_T = fixed.get("mu_T", 1.0)
    return [_theta(abs(mean) or 1.0, var or 1.0, s, mu_T)
            for s in SHARES]


def build(t: dict) -> CompoundChain:
    return CompoundChain((IGParams(t["mu_T"], t["lambda_T"]),
           IGParams(t["mu_U"], t["lambda_U"])))


def weak(t: dict) -> list:
    return weak_clocks(t["mu_T"] / (t["lambda_T"] * t["mu_U"]),
           t["mu_U"] / t["lambda_U"], ("lambda_T",), ("lambda_U",))


MODEL = ModelSpec(
    tag      = "cig",
    names    = ("lambda_U", "mu_U", "lambda_T", "mu_T"),
    positive = ("lambda_U", "mu_U", "lambda_T", "mu_T"),
    build    = build,
    mom_init = mom_init,
    gauge    = {"mu_T": 1.0},
    support  = "positive",
    guesses  = guesses,
    weak     = weak,
    summary  = "compound inverse Gaussian T(U(1))",
)
