"""Double gamma law V(1) = T(U(1)); alpha_T pins the time gauge."""
# ========================= STANDARDS =======================
import math

# ========================== LOCALS =========================
from subclock.laws.subordinators import GammaParams
from subclock.laws.compound import CompoundChain
from subclock.errors import FitError
from ._base import ModelSpec, data_moments, weak_clocks


SHARES = (0.05, 0.25, 0.5, 0.75, 0.95)


def _theta(mean: float, var: float, share: float, alpha_T: float
          ) -> dict:
    # var = mean (y + t) with y = alpha_T t / lambda_U, t = 1/lambda_T
    K = var / mean
    y = share * K
    t = K - y
    return {"alpha_T":  alpha_T,
            "lambda_T": 1 / t,
            "lambda_U": alpha_T * t / y,
            "alpha_U":  mean / y}


def mom_init(data, fixed: dict) -> dict:
    """
    With K = var/mean the third cumulant is mean (y^2 - K y + 2 K^2)
    for the U share y of K, attainable for ratios
    k3 / (mean K^2) in [1.75, 2]; the smaller root is taken.
    """
    mean, var, skew, _ = data_moments(data)
    if mean <= 0 or var <= 0:
        raise FitError("double gamma needs positive mean and variance")
    alpha_T = fixed.get("alpha_T", 1.0)
    K       = var / mean
    ratio   = skew * var ** 1.5 / (mean * K * K)
    if not 1.75 * 0.95 <= ratio <= 2 * 1.05:
        raise FitError(f"skewness ratio {ratio:.4g} outside the "
                     + "double gamma region [1.75, 2]")
    ratio = min(max(ratio, 1.75), 2 - 1e-6)
    share = (1 - math.sqrt(max(0.0, 1 - 4 * (2 - ratio)))) / 2
    return _theta(mean, var, max(share, 1e-9), alpha_T)


def guesses(data, fixed: dict) -> list[dict]:
    mean, var, _, _ = data_moments(data)
    alpha_T = fixed.get("alpha_T", 1.0)
    return [_theta(abs(mean) or 1.0, var or 1.0, s, alpha_T)
            for s in SHARES]


def build(t: dict) -> CompoundChain:
    return CompoundChain((GammaParams(t["alpha_T"], t["lambda_T"]),
           GammaParams(t["alpha_U"], t["lambda_U"])))


def weak(t: dict) -> list:
    return weak_clocks(t["lambda_U"] / (t["alpha_T"] * t["alpha_U"]),
           1.0 / t["alpha_U"], ("alpha_T", "lambda_T"), ("alpha_U",))


MODEL = ModelSpec(
    tag      = "dgamma",
    names    = ("alpha_U", "lambda_U", "alpha_T", "lambda_T"),
    positive = ("alpha_U", "lambda_U", "alpha_T", "lambda_T"),
    build    = build,
    mom_init = mom_init,
    gauge    = {"alpha_T": 1.0},
    support  = "positive",
    guesses  = guesses,
    weak     = weak,
    summary  = "double gamma T(U(1))",
)
