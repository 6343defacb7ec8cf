"""
Variance-gamma-gamma returns. alpha_T and lambda_T pin the
time-change gauge and the scale of V against (rho, sigma).
"""
# ========================== LOCALS =========================
from subclock.laws.subordinators import GammaParams
from subclock.laws.logprice import ReturnLaw, two_level
from subclock.errors import FitError
from ._base import ModelSpec, data_moments, skew_is_zero
from ._base import weak_clocks


EXCESS = (0.5, 3.0, 10.0, 30.0)


def _theta(data, fixed: dict, excess: float, use_skew: bool = True
          ) -> dict:
    mean, var, skew, _ = data_moments(data)
    A     = fixed.get("alpha_T", 1.0)
    t     = 1 / fixed.get("lambda_T", 1.0)
    gamma = fixed.get("gamma", 0.0)

    # rho = 0: excess kurtosis 3/alpha_U + 3 lambda_U/(alpha_U A),
    # split evenly
    a_U  = 6 / excess
    l_U  = A
    c, L = a_U / l_U, 1 / l_U
    sig2 = var / (c * A * t)
    rho  = fixed.get("rho", 0.0)

    if "rho" not in fixed and use_skew and not skew_is_zero(skew,
            len(data)):
        k3    = skew * var ** 1.5
        rho   = k3 / (3 * c * A * t * t * sig2 * (A * L + 1))
        rho   = max(-10.0, min(10.0, rho))
        extra = c * L * (A * t) ** 2 + c * A * t * t
        for _ in range(20):
            if var - rho ** 2 * extra > 0.1 * var: break
            rho /= 2
        sig2 = (var - rho ** 2 * extra) / (c * A * t)

    return {"alpha_U": a_U, "lambda_U": l_U, "alpha_T": A,
            "lambda_T": 1 / t,
            "mu": fixed.get("mu", mean - c * (gamma + rho * A * t)),
            "gamma": gamma, "rho": rho,
            "sigma": fixed.get("sigma", sig2 ** 0.5)}


def mom_init(data, fixed: dict) -> dict:
    _, var, _, excess = data_moments(data)
    if var <= 0 or excess <= 0:
        raise FitError("VGG needs positive variance and excess "
                     + "kurtosis")
    return _theta(data, fixed, excess)


def guesses(data, fixed: dict) -> list[dict]:
    return [_theta(data, fixed, e, use_skew=False) for e in EXCESS]


def build(t: dict) -> ReturnLaw:
    return ReturnLaw(two_level(t["mu"], t["gamma"], t["rho"],
           t["sigma"], GammaParams(t["alpha_T"], t["lambda_T"]),
           GammaParams(t["alpha_U"], t["lambda_U"])), "VGG")


def weak(t: dict) -> list:
    return weak_clocks(t["lambda_U"] / (t["alpha_T"] * t["alpha_U"]),
           1.0 / t["alpha_U"], ("alpha_T", "lambda_T", "rho"),
           ("alpha_U", "mu", "gamma"))


MODEL = ModelSpec(
    tag      = "vgg",
    names    = ("alpha_U", "lambda_U", "alpha_T", "lambda_T", "mu",
                "gamma", "rho", "sigma"),
    positive = ("alpha_U", "lambda_U", "alpha_T", "lambda_T",
                "sigma"),
    build    = build,
    mom_init = mom_init,
    gauge    = {"alpha_T": 1.0, "lambda_T": 1.0},
    guesses  = guesses,
    weak     = weak,
    summary  = "variance-gamma-gamma returns",
)
