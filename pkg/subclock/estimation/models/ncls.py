"""
Normal compound Levy-stable returns. No moments exist, so the
start comes from the median and the empirical characteristic
function; b_T and b_U pin the gauges.
"""
# ========================= STANDARDS =======================
import math

# ======================= THIRD-PARTIES =====================
import numpy as np

# ========================== LOCALS =========================
from subclock.laws.subordinators import LevyStableParams
from subclock.laws.logprice import ReturnLaw, two_level
from subclock.errors import FitError
from ._base import ModelSpec, robust_scale


def ecf_modulus(data, v) -> np.ndarray:
    data = np.asarray(data, dtype=float)
    return np.array([abs(np.mean(np.exp(1j * r * data))) for r in v])


def mom_init(data, fixed: dict) -> dict:
    """
    With rho = gamma = 0 the modulus of the chf is
    exp(-sqrt(2 b_U sqrt(b_T) sigma |v|)); sigma is read off the
    frequency where the empirical modulus crosses 1/e.
    """
    data  = np.asarray(data, dtype=float)
    b_T   = fixed.get("b_T", 0.5)
    b_U   = fixed.get("b_U", 0.5)
    scale = robust_scale(data)
    v     = np.geomspace(1e-3, 1e3, 241) / scale
    mod   = ecf_modulus(data, v)
    below = np.nonzero(mod < math.exp(-1))[0]
    if below.size == 0 or below[0] == 0:
        raise FitError("empirical chf modulus never crosses 1/e")
    k      = below[0]
    lv     = np.interp(-1.0, np.log(mod[[k, k - 1]]),
             np.log(v[[k, k - 1]]))
    v_star = math.exp(lv)
    return {"b_U": b_U, "b_T": b_T,
            "mu": fixed.get("mu", float(np.median(data))),
            "gamma": fixed.get("gamma", 0.0),
            "rho": fixed.get("rho", 0.0),
            "sigma": 1 / (2 * b_U * math.sqrt(b_T) * v_star)}


def guesses(data, fixed: dict) -> list[dict]:
    scale = robust_scale(np.asarray(data, dtype=float))
    return [{"b_U": fixed.get("b_U", 0.5), "b_T": fixed.get("b_T",
             0.5), "mu": float(np.median(data)), "gamma": 0.0,
             "rho": 0.0, "sigma": f * scale} for f in (0.1, 1.0, 10.0)]


def build(t: dict) -> ReturnLaw:
    return ReturnLaw(two_level(t["mu"], t["gamma"], t["rho"],
           t["sigma"], LevyStableParams(t["b_T"]),
           LevyStableParams(t["b_U"])), "NCLS")


MODEL = ModelSpec(
    tag      = "ncls",
    names    = ("b_U", "b_T", "mu", "gamma", "rho", "sigma"),
    positive = ("b_U", "b_T", "sigma"),
    build    = build,
    mom_init = mom_init,
    gauge    = {"b_T": 0.5, "b_U": 0.5},
    guesses  = guesses,
    summary  = "normal compound Levy-stable returns",
)
