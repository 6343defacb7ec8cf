"""
Unit-increment return laws of subordinated log-price processes,

    Lambda = mu + sum_k g_k W_k(1) + sigma B_{W_0(1)}

where W_0 = V is the full compound clock, W_{n-1} the innermost
clock on calendar time and g_k the loading on level k (outer to
inner, so a 2-level model carries (rho, gamma)). Conditioning
level by level gives the characteristic exponent recursion

    z_0     = i v g_0 - sigma^2 v^2 / 2
    z_k     = i v g_k + K_{k-1}(z_{k-1})
    ln chf  = i v mu + K_{n-1}(z_{n-1})

which is what the n-fold formulas evaluate. Families: NCLS/NCnS
(Levy-stable clocks), VGG/VGGn (gamma), NCIG/NCIGn (inverse
Gaussian) and the one-level NLS, VG, NIG.
"""
# ========================= STANDARDS =======================
from dataclasses import dataclass
from typing import Sequence
import math

# ======================= THIRD-PARTIES =====================
from scipy import special
import numpy as np

# ========================== LOCALS =========================
from .subordinators import LevyStableParams, GammaParams, IGParams
from .subordinators import StableSubParams, gamma_frozen, ig_frozen
from .subordinators import gamma_logpdf, ig_logpdf, _scalar
from .compound import CompoundChain, CumulantSet, MomentSet
from .compound import compose_cumulants, _u_range
from ..numerics import FFTConfig, DensityGrid, Transform, sweeps
from ..numerics import chf_to_pdf_fft, adaptive_quad, tracked_sqrt
from ..numerics import tracked_log, log_bessel_kv
from ..errors import DomainError, require
from ..utils import rng_from


FAMILIES = {
    "NLS":   (LevyStableParams, 1, 1),
    "NCLS":  (LevyStableParams, 2, 2),
    "NCnS":  ((LevyStableParams, StableSubParams), 2, None),
    "VG":    (GammaParams, 1, 1),
    "VGG":   (GammaParams, 2, 2),
    "VGGn":  (GammaParams, 2, None),
    "NIG":   (IGParams, 1, 1),
    "NCIG":  (IGParams, 2, 2),
    "NCIGn": (IGParams, 2, None),
}


@dataclass(frozen=True)
class LogPriceParams:
    """
    Attributes:
        mu (float): Drift per unit time
        sigma (float): Diffusion scale, > 0
        chain (CompoundChain): Intrinsic-time structure
        loadings (tuple): One loading per chain level, outer to
                          inner; (rho, gamma) for 2 levels
    """
    mu:       float
    sigma:    float
    chain:    CompoundChain
    loadings: tuple

    def __post_init__(self):
        object.__setattr__(self, "loadings", tuple(float(g) for g
                           in self.loadings))
        require(np.isfinite(self.mu), "mu must be finite")
        require(np.isfinite(self.sigma) and self.sigma > 0,
                "sigma must be > 0")
        require(isinstance(self.chain, CompoundChain),
                "chain must be a CompoundChain")
        require(len(self.loadings) == len(self.chain), "need one "
                + "loading per chain level")
        require(all(np.isfinite(self.loadings)), "loadings must be "
                + "finite")

    @property
    def rho(self) -> float:
        return self.loadings[0]

    @property
    def gamma(self) -> float:
        return self.loadings[-1] if len(self.loadings) > 1 else 0.0


def two_level(mu: float, gamma: float, rho: float, sigma: float,
              outer, inner) -> LogPriceParams:
    return LogPriceParams(mu, sigma, CompoundChain((outer, inner)),
           (rho, gamma))


@dataclass(frozen=True)
class ReturnLaw:
    params: LogPriceParams
    family: str

    def __post_init__(self):
        require(self.family in FAMILIES, f"unknown family "
                + f"{self.family}")
        kinds, lo, hi = FAMILIES[self.family]
        depth         = len(self.params.chain)
        require(depth >= lo and (hi is None or depth <= hi),
                f"{self.family} needs a chain of depth "
                + (f"{lo}" if hi == lo else f">= {lo}")
                + f", got {depth}")
        for law in self.params.chain.laws:
            require(isinstance(law, kinds), f"{self.family} chains "
                    + f"cannot hold {law.tag} laws")

    # ===================== transforms ======================
    def log_chf(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return _log_transform(self.params, 1j * v + 0j, sweeps(v))

    def chf(self, v):
        return _scalar(np.exp(self.log_chf(v)))

    def transform(self) -> Transform:
        return Transform(self.chf, "chf")

    def _log_mgf(self, s: float) -> float | None:
        p   = self.params
        z   = p.loadings[0] * s + 0.5 * p.sigma ** 2 * s * s
        for k, law in enumerate(p.chain.laws):
            if not (z < law.mgf_sup or z == 0): return None
            z = law.cumulant_exponent(z).real
            if k + 1 < len(p.chain): z = z + p.loadings[k + 1] * s
        return p.mu * s + float(z)

    def mgf_interval(self) -> tuple[float, float]:
        """Open interval of v with finite E exp(v Lambda)."""
        return (-_edge(lambda s: self._log_mgf(-s) is not None),
                _edge(lambda s: self._log_mgf(s) is not None))

    def mgf(self, v):
        v      = np.asarray(v, dtype=float)
        lo, hi = self.mgf_interval()
        if np.any(v <= lo) or np.any(v >= hi):
            raise DomainError(f"MGF needs v in ({lo:.10g}, "
                            + f"{hi:.10g})")
        return _scalar(np.exp(np.vectorize(self._log_mgf)(v)))

    # ======================= moments =======================
    def cumulants(self) -> CumulantSet | None:
        return _cumulants(self.params)

    def moments(self) -> MomentSet:
        cum = self.cumulants()
        return MomentSet.undefined() if cum is None else cum.moments()

    # ====================== densities ======================
    def pdf_grid(self, cfg: FFTConfig | None = None) -> DensityGrid:
        return chf_to_pdf_fft(self.chf, cfg)

    def sample(self, n: int, seed=None) -> np.ndarray:
        return sample_return(self, n, seed)


def _edge(valid, start: float = 1.0, cap: float = 1e12) -> float:
    # bisection for the end of an interval [0, edge) of validity
    if not valid(1e-300): return 0.0
    lo, hi = 0.0, start
    while valid(hi):
        lo, hi = hi, hi * 2
        if hi > cap: return math.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if valid(mid): lo = mid
        else: hi = mid
        if hi - lo <= 1e-15 * hi: break
    return lo


def _log_transform(p: LogPriceParams, s, sweep=None) -> np.ndarray:
    z = p.loadings[0] * s + 0.5 * p.sigma ** 2 * s * s
    for k, law in enumerate(p.chain.laws):
        z = law.cumulant_exponent(z, sweep)
        if k + 1 < len(p.chain): z = z + p.loadings[k + 1] * s
    return p.mu * s + z


def _cumulants(p: LogPriceParams) -> CumulantSet | None:
    derivs = (p.loadings[0], p.sigma ** 2, 0.0, 0.0)
    for k, law in enumerate(p.chain.laws):
        cum = law.cumulants()
        if cum is None: return None
        derivs = compose_cumulants(cum, derivs)
        if k + 1 < len(p.chain):
            derivs = (derivs[0] + p.loadings[k + 1], *derivs[1:])
    return CumulantSet(derivs[0] + p.mu, *derivs[1:])


def _require_family(p: LogPriceParams, family: str) -> ReturnLaw:
    return ReturnLaw(p, family)


# ========================== NCLS ===========================
def ncls_chf(p: LogPriceParams, v):
    """
    exp(i v mu - sqrt(-2 b_U (i v gamma - sqrt(-2 b_T (i v rho
    - v^2 sigma^2 / 2)))))
    """
    _require_family(p, "NCLS")
    v     = np.asarray(v, dtype=float)
    sweep = sweeps(v)
    T, U  = p.chain.laws
    inner = tracked_sqrt(-2 * T.b * (1j * v * p.rho - v * v
            * p.sigma ** 2 / 2), sweep)
    outer = tracked_sqrt(-2 * U.b * (1j * v * p.gamma - inner),
            sweep)
    return _scalar(np.exp(1j * v * p.mu - outer))


def ncls_moments(p: LogPriceParams) -> MomentSet:
    _require_family(p, "NCLS")
    return MomentSet.undefined()


def ncls_pdf_direct(p: LogPriceParams, x) -> float:
    """
    Single-integral Bessel-K1 representation: the Brownian layer
    and the outer Levy clock integrate out in closed form, the
    inner clock U is integrated numerically in ln u.

    Raises:
        DomainError: rho = 0 (use the FFT route)
    """
    _require_family(p, "NCLS")
    require(p.rho != 0, "the direct NCLS density needs rho != 0; "
            + "use the FFT route")
    T, U   = p.chain.laws
    x      = float(x)
    s2     = p.sigma ** 2
    r      = abs(p.rho)
    log_c  = math.log(2 * r * math.sqrt(T.b * U.b) / (p.sigma * (2
           * math.pi) ** 1.5))

    def integrand(u: float) -> float:
        y = x - p.mu - p.gamma * u
        R = math.sqrt(y * y + T.b * s2 * u * u)
        z = r * R / s2
        return math.exp(log_c - 0.5 * math.log(u) + y * p.rho / s2
               - U.b / (2 * u) - z) * special.k1e(z) / R

    return adaptive_quad(integrand, 0.0, math.inf, tol=1e-12,
           rtol=1e-8, log_scale=True).value


def ncns_chf(p: LogPriceParams, v):
    """
    n-level normal-compound-stable chf by the inner-to-outer
    recursion Psi_k = sqrt(-2 b_k (i v g_k - Psi_{k-1})).
    """
    ReturnLaw(p, "NCnS")
    return _scalar(np.exp(_log_transform(p, 1j * np.asarray(v,
           dtype=float) + 0j, sweeps(np.asarray(v, dtype=float)))))


# =========================== VGG ===========================
def vgg_chf(p: LogPriceParams, v):
    """
    exp(i v mu) (1 - i v gamma/lambda_U + (alpha_T/lambda_U)
    ln(1 - i v rho/lambda_T + sigma^2 v^2/(2 lambda_T)))^(-alpha_U)
    """
    _require_family(p, "VGG")
    v     = np.asarray(v, dtype=float)
    sweep = sweeps(v)
    T, U  = p.chain.laws
    inner = tracked_log(1 - 1j * v * p.rho / T.lam + p.sigma ** 2
            * v * v / (2 * T.lam), sweep)
    base  = 1 - 1j * v * p.gamma / U.lam + (T.alpha / U.lam) * inner
    return _scalar(np.exp(1j * v * p.mu - U.alpha * tracked_log(base,
           sweep)))


def vgg_mgf(p: LogPriceParams, v):
    return _require_family(p, "VGG").mgf(v)


def vgg_mgf_interval(p: LogPriceParams) -> tuple[float, float]:
    return _require_family(p, "VGG").mgf_interval()


def vgg_mgf_bound_closed(p: LogPriceParams) -> float:
    """(sqrt(rho^2 + 2 lambda_T sigma^2) - rho) / sigma^2."""
    T = p.chain.laws[0]
    return (math.sqrt(p.rho ** 2 + 2 * T.lam * p.sigma ** 2) - p.rho) \
         / p.sigma ** 2


def _two_level_cumulants(tcum, ucum, mu, gamma, rho, sigma
                        ) -> CumulantSet:
    k1, k2, k3, k4 = tcum
    s2 = sigma * sigma
    g  = (gamma + k1 * rho,
          k2 * rho ** 2 + k1 * s2,
          k3 * rho ** 3 + 3 * k2 * rho * s2,
          k4 * rho ** 4 + 6 * k3 * rho ** 2 * s2 + 3 * k2 * s2 * s2)
    u1, u2, u3, u4 = ucum
    return CumulantSet(
        mu + u1 * g[0],
        u2 * g[0] ** 2 + u1 * g[1],
        u3 * g[0] ** 3 + 3 * u2 * g[0] * g[1] + u1 * g[2],
        u4 * g[0] ** 4 + 6 * u3 * g[0] ** 2 * g[1]
        + u2 * (3 * g[1] ** 2 + 4 * g[0] * g[2]) + u1 * g[3])


def vgg_moments(p: LogPriceParams) -> MomentSet:
    """
    Mean mu + (alpha_U/lambda_U)(gamma + rho alpha_T/lambda_T),
    variance, skewness and excess kurtosis from the four
    cumulants of the gamma-in-gamma mixture. Lambda is infinitely
    divisible without a Gaussian part, so its excess kurtosis is
    never negative.
    """
    _require_family(p, "VGG")
    T, U = p.chain.laws
    return _two_level_cumulants(T.cumulants(), U.cumulants(), p.mu,
           p.gamma, p.rho, p.sigma).moments()


def vgg_pdf_direct(p: LogPriceParams, x) -> float:
    """
    Normal mixture over (U, T): the inner integral over T(u) is the
    variance-gamma density in closed form (Bessel K), the outer
    integral over U is adaptive quadrature in ln u. Slow; an
    oracle for the FFT route.
    """
    _require_family(p, "VGG")
    T, U  = p.chain.laws
    x     = float(x)
    s2    = p.sigma ** 2
    q     = p.rho ** 2 + 2 * T.lam * s2
    hint  = (x - p.mu) / p.gamma if p.gamma else None
    lo, hi, pts = _u_range(gamma_frozen(U), hint if hint and hint > 0
                  else None)

    def integrand(u: float) -> float:
        a = T.alpha * u
        y = x - p.mu - p.gamma * u
        if y == 0: return 0.0
        z = abs(y) * math.sqrt(q) / s2
        log_vg = (math.log(2) + p.rho * y / s2 + a * math.log(T.lam)
                 - 0.5 * math.log(2 * math.pi) - math.log(p.sigma)
                 - math.lgamma(a) + (a - 0.5) / 2 * math.log(y * y
                 / q) + float(log_bessel_kv(a - 0.5, z)))
        return math.exp(log_vg + float(gamma_logpdf(U, u)))

    return adaptive_quad(integrand, lo, hi, tol=1e-10, rtol=1e-8,
           log_scale=True, points=pts).value


def multi_vgg_chf(p: LogPriceParams, v):
    """n-fold gamma chf by inner-to-outer nested logarithms."""
    ReturnLaw(p, "VGGn")
    v = np.asarray(v, dtype=float)
    return _scalar(np.exp(_log_transform(p, 1j * v + 0j, sweeps(v))))


# ========================== NCIG ===========================
def ncig_chf(p: LogPriceParams, v):
    """
    exp(i v mu + (lambda_U/mu_U)[1 - sqrt(1 - (2 mu_U^2/lambda_U)
    ((lambda_T/mu_T)(1 - sqrt(1 - (2 mu_T^2/lambda_T)(i v rho
    - v^2 sigma^2/2))) + i v gamma))])
    """
    _require_family(p, "NCIG")
    v     = np.asarray(v, dtype=float)
    sweep = sweeps(v)
    T, U  = p.chain.laws
    z0    = 1j * v * p.rho - v * v * p.sigma ** 2 / 2
    r_in  = tracked_sqrt(1 - (2 * T.mu ** 2 / T.lam) * z0, sweep)
    z1    = (T.lam / T.mu) * (1 - r_in) + 1j * v * p.gamma
    r_out = tracked_sqrt(1 - (2 * U.mu ** 2 / U.lam) * z1, sweep)
    return _scalar(np.exp(1j * v * p.mu + (U.lam / U.mu)
           * (1 - r_out)))


def ncig_moments(p: LogPriceParams) -> MomentSet:
    """
    mean     mu + mu_U gamma + mu_U mu_T rho
    variance mu_U (rho^2 mu_T^3/lambda_T + sigma^2 mu_T)
             + (mu_U^3/lambda_U)(gamma + rho mu_T)^2
    skewness and excess kurtosis from the third and fourth
    cumulants of the same mixture.
    """
    _require_family(p, "NCIG")
    T, U = p.chain.laws
    cum  = _two_level_cumulants(T.cumulants(), U.cumulants(), p.mu,
           p.gamma, p.rho, p.sigma)
    mean = p.mu + U.mu * p.gamma + U.mu * T.mu * p.rho
    var  = U.mu * (p.rho ** 2 * T.mu ** 3 / T.lam + p.sigma ** 2
         * T.mu) + U.mu ** 3 / U.lam * (p.gamma + p.rho * T.mu) ** 2
    return MomentSet("finite", mean, var, cum.skewness,
           cum.excess_kurtosis)


def ncig_pdf_direct(p: LogPriceParams, x) -> float:
    """
    Conditional-normal mixture over (U, T) with kernel
    exp(-(x - mu - gamma u - rho t)^2 / (2 sigma^2 t)). The t
    integral is a normal-inverse-Gaussian density (Bessel K1),
    the u integral is adaptive quadrature in ln u.
    """
    _require_family(p, "NCIG")
    T, U  = p.chain.laws
    x     = float(x)
    s2    = p.sigma ** 2
    c     = p.rho ** 2 / (2 * s2) + T.lam / (2 * T.mu ** 2)
    lo, hi, pts = _u_range(ig_frozen(U))

    def integrand(u: float) -> float:
        lam = T.lam * u * u
        y   = x - p.mu - p.gamma * u
        a   = y * y / (2 * s2) + lam / 2
        q   = 2 * math.sqrt(a * c)
        log_in = (0.5 * math.log(lam) - math.log(2 * math.pi
                 * p.sigma) + T.lam * u / T.mu + p.rho * y / s2
                 + math.log(2) + 0.5 * math.log(c / a)
                 + math.log(special.k1e(q)) - q)
        return math.exp(log_in + float(ig_logpdf(U, u)))

    return adaptive_quad(integrand, lo, hi, tol=1e-10, rtol=1e-8,
           log_scale=True, points=pts).value


def multi_ncig_chf(p: LogPriceParams, v):
    """n-fold IG chf by inner-to-outer nested radicals."""
    ReturnLaw(p, "NCIGn")
    v = np.asarray(v, dtype=float)
    return _scalar(np.exp(_log_transform(p, 1j * v + 0j, sweeps(v))))


# ========================= SAMPLING ========================
def sample_return(law: ReturnLaw, n: int, seed=None) -> np.ndarray:
    """
    Draws Lambda: the clocks innermost first, then a normal with
    variance sigma^2 V(1) plus drift and loadings.
    """
    require(n >= 1, "n must be >= 1")
    p     = law.params
    rng   = rng_from(seed)
    clock = np.ones(n)
    total = np.full(n, p.mu)
    for k in reversed(range(len(p.chain))):
        clock  = p.chain.laws[k].sample_at(clock, rng)
        total += p.loadings[k] * clock
    return total + p.sigma * np.sqrt(clock) * rng.standard_normal(n)


def single_subordinated(law: ReturnLaw) -> ReturnLaw:
    """
    M_1 = mu + gamma U(1) + sigma B_{U(1)}: the same model with the
    behavioral clock T removed.
    """
    p = law.params
    require(len(p.chain) == 2, "needs a 2-level law")
    inner  = p.chain.laws[1]
    family = {"levy-stable": "NLS", "gamma": "VG", "ig": "NIG"}[
             inner.tag]
    return ReturnLaw(LogPriceParams(p.mu, p.sigma, CompoundChain(
           (inner,)), (p.gamma,)), family)


def make_law(family: str, mu: float, sigma: float,
             chain: Sequence, loadings: Sequence[float]) -> ReturnLaw:
    return ReturnLaw(LogPriceParams(mu, sigma, CompoundChain(tuple(
           chain)), tuple(loadings)), family)
