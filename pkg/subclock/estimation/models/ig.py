"""Inverse Gaussian law for a squared volatility index."""
# ======================= THIRD-PARTIES =====================
import numpy as np

# ========================== LOCALS =========================
from subclock.laws.subordinators import IGParams
from subclock.laws.compound import CompoundChain
from subclock.errors import DataError, require
from ._base import ModelSpec


def ig_mle(data) -> IGParams:
    """
    Closed-form maximum likelihood: mu = mean, lambda = n /
    sum(1/x_i - 1/mean).

    Raises:
        DataError: fewer than 2 points, nonpositive data, or
                   constant data (the lambda sum vanishes)
    """
    data = np.asarray(data, dtype=float)
    require(data.size >= 2, "IG fit needs at least 2 points",
            DataError)
    require(bool(np.all(data > 0)), "IG data must be positive",
            DataError)
    mu    = float(np.mean(data))
    total = float(np.sum(1.0 / data - 1.0 / mu))
    if not total > 0 or total * mu < 1e-14 * data.size:
        raise DataError("degenerate data: sum(1/x - 1/mean) <= 0")
    return IGParams(mu, data.size / total)


def _direct(data) -> dict:
    p = ig_mle(data)
    return {"mu_U": p.mu, "lambda_U": p.lam}


def _mom_init(data, fixed) -> dict:
    mean, var = float(np.mean(data)), float(np.var(data, ddof=1))
    return {"mu_U": mean, "lambda_U": mean ** 3 / var}


MODEL = ModelSpec(
    tag      = "ig",
    names    = ("mu_U", "lambda_U"),
    positive = ("mu_U", "lambda_U"),
    build    = lambda t: CompoundChain((IGParams(t["mu_U"],
               t["lambda_U"]),)),
    mom_init = _mom_init,
    support  = "positive",
    direct   = _direct,
    summary  = "inverse Gaussian (closed-form MLE)",
)
