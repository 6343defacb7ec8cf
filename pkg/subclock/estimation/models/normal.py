"""Gaussian returns, the mis-specified competitor."""
# ========================= STANDARDS =======================
from dataclasses import dataclass

# ======================= THIRD-PARTIES =====================
from scipy import stats
import numpy as np

# ========================== LOCALS =========================
from subclock.numerics import FFTConfig, DensityGrid, chf_to_pdf_fft
from subclock.laws.compound import MomentSet
from subclock.errors import require
from subclock.utils import rng_from
from ._base import ModelSpec


@dataclass(frozen=True)
class NormalLaw:
    mu:    float
    sigma: float

    def __post_init__(self):
        require(self.sigma > 0, "sigma must be > 0")

    def chf(self, v):
        v = np.asarray(v, dtype=float)
        return np.exp(1j * v * self.mu - 0.5 * (self.sigma * v) ** 2)

    def pdf_grid(self, cfg: FFTConfig | None = None) -> DensityGrid:
        return chf_to_pdf_fft(self.chf, cfg)

    def logpdf(self, x) -> np.ndarray:
        return stats.norm.logpdf(x, self.mu, self.sigma)

    def cdf(self, x) -> np.ndarray:
        return stats.norm.cdf(x, self.mu, self.sigma)

    def moments(self) -> MomentSet:
        return MomentSet("finite", self.mu, self.sigma ** 2, 0.0, 0.0)

    def sample(self, n: int, seed=None) -> np.ndarray:
        return rng_from(seed).normal(self.mu, self.sigma, n)


def normal_mle(data) -> dict:
    data = np.asarray(data, dtype=float)
    require(data.size >= 2, "normal fit needs at least 2 points")
    return {"mu": float(np.mean(data)), "sigma": float(np.std(data))}


MODEL = ModelSpec(
    tag      = "normal",
    names    = ("mu", "sigma"),
    positive = ("sigma",),
    build    = lambda t: NormalLaw(t["mu"], t["sigma"]),
    mom_init = lambda data, fixed: normal_mle(data),
    direct   = normal_mle,
    summary  = "Gaussian returns (closed-form MLE)",
)
