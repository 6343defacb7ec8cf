"""
Normal compound inverse Gaussian returns. mu_T and mu_U pin the
time-change gauge and the scale of V against (rho, sigma).
"""
# ========================== LOCALS =========================
from subclock.laws.subordinators import IGParams
from subclock.laws.logprice import ReturnLaw, two_level
from subclock.errors import FitError
from ._base import ModelSpec, data_moments, skew_is_zero
from ._base import weak_clocks


EXCESS = (0.5, 3.0, 10.0, 30.0)


def _theta(data, fixed: dict, excess: float, use_skew: bool = True
          ) -> dict:
    mean, var, skew, _ = data_moments(data)
    mu_T  = fixed.get("mu_T", 1.0)
    mu_U  = fixed.get("mu_U", 1.0)
    gamma = fixed.get("gamma", 0.0)

    # rho = 0: excess kurtosis 3 mu_U/lambda_U + 3 mu_T/(mu_U
    # lambda_T), split evenly between the two clocks
    lam_U = 6 * mu_U / excess
    lam_T = 6 * mu_T / (mu_U * excess)
    sig2  = var / (mu_U * mu_T)
    rho   = fixed.get("rho", 0.0)

    if "rho" not in fixed and use_skew and not skew_is_zero(skew,
            len(data)):
        k3    = skew * var ** 1.5
        slope = 3 * sig2 * mu_T ** 2 * (mu_U ** 3 / lam_U + mu_U
              * mu_T / lam_T)
        rho   = max(-10.0, min(10.0, k3 / slope))
        extra = mu_T ** 2 * mu_U * (mu_T / lam_T + mu_U ** 2 / lam_U)
        for _ in range(20):
            left = var - rho ** 2 * extra
            if left > 0.1 * var: break
            rho /= 2
        sig2 = (var - rho ** 2 * extra) / (mu_U * mu_T)

    return {"lambda_U": lam_U, "mu_U": mu_U, "lambda_T": lam_T,
            "mu_T": mu_T,
            "mu": fixed.get("mu", mean - mu_U * mu_T * rho - mu_U
                  * gamma),
            "gamma": gamma, "rho": rho,
            "sigma": fixed.get("sigma", sig2 ** 0.5)}


def mom_init(data, fixed: dict) -> dict:
    """
    rho from the third cumulant at first order, sigma from the
    variance, the clock shapes from the excess kurtosis, mu from
    the mean; gamma starts at 0.
    """
    _, var, _, excess = data_moments(data)
    if var <= 0 or excess <= 0:
        raise FitError("NCIG needs positive variance and excess "
                     + "kurtosis")
    return _theta(data, fixed, excess)


def guesses(data, fixed: dict) -> list[dict]:
    return [_theta(data, fixed, e, use_skew=False) for e in EXCESS]


def build(t: dict) -> ReturnLaw:
    return ReturnLaw(two_level(t["mu"], t["gamma"], t["rho"],
           t["sigma"], IGParams(t["mu_T"], t["lambda_T"]),
           IGParams(t["mu_U"], t["lambda_U"])), "NCIG")


def weak(t: dict) -> list:
    # a drifting T leaves only gamma + mu_T rho, a drifting U only
    # mu + mu_U gamma
    return weak_clocks(t["mu_T"] / (t["lambda_T"] * t["mu_U"]),
           t["mu_U"] / t["lambda_U"], ("lambda_T", "rho"),
           ("lambda_U", "mu", "gamma"))


MODEL = ModelSpec(
    tag      = "ncig",
    names    = ("lambda_U", "mu_U", "lambda_T", "mu_T", "mu", "gamma",
                "rho", "sigma"),
    positive = ("lambda_U", "mu_U", "lambda_T", "mu_T", "sigma"),
    build    = build,
    mom_init = mom_init,
    gauge    = {"mu_T": 1.0, "mu_U": 1.0},
    guesses  = guesses,
    weak     = weak,
    summary  = "normal compound inverse Gaussian returns",
)
