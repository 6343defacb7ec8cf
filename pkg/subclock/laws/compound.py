"""
Composition algebra for subordinators.

A `CompoundChain` lists base laws outer-to-inner: [T, U] is
V(t) = T(U(t)), the innermost law runs on calendar time. Its
cumulant exponent is the composition

    K_V = K_U o K_T      (n levels: K_{n-1} o ... o K_0)

which gives Laplace exponents, characteristic functions, MGFs,
MGF validity bounds and, through fourth-order Faa di Bruno,
cumulants. The double and n-fold stable, gamma and inverse
Gaussian operations below are the closed forms of the same
algebra and are cross-checked against it.
"""
# ========================= STANDARDS =======================
from dataclasses import dataclass
from typing import Sequence
import math

# ======================= THIRD-PARTIES =====================
from scipy import special
import numpy as np

# ========================== LOCALS =========================
from .subordinators import StableSubParams, LevyStableParams
from .subordinators import GammaParams, IGParams, BaseLaw
from .subordinators import gamma_logpdf, ig_logpdf, gamma_frozen
from .subordinators import ig_frozen, _positive_args, _scalar
from ..numerics import adaptive_quad, sweeps, tracked_sqrt
from ..numerics import FFTConfig, DensityGrid, chf_to_pdf_fft
from ..errors import DomainError, require
from ..utils import rng_from


BASE_LAWS = (StableSubParams, LevyStableParams, GammaParams, IGParams)


# ========================= MOMENTS =========================
@dataclass(frozen=True)
class MomentSet:
    """
    Tagged moment result. `status` is "finite", "undefined" (no
    moments exist, values are None) or "numeric" (obtained from
    the transform numerically).
    """
    status:          str
    mean:            float | None = None
    variance:        float | None = None
    skewness:        float | None = None
    excess_kurtosis: float | None = None

    @classmethod
    def undefined(cls) -> "MomentSet":
        return cls("undefined")


@dataclass(frozen=True)
class CumulantSet:
    kappa1: float
    kappa2: float
    kappa3: float
    kappa4: float

    def __post_init__(self):
        require(self.kappa2 >= 0, "kappa2 must be nonnegative")

    @property
    def mean(self) -> float:
        return self.kappa1

    @property
    def variance(self) -> float:
        return self.kappa2

    @property
    def skewness(self) -> float:
        return self.kappa3 / self.kappa2 ** 1.5

    @property
    def excess_kurtosis(self) -> float:
        return self.kappa4 / self.kappa2 ** 2

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.kappa1, self.kappa2, self.kappa3, self.kappa4)

    def moments(self, status: str = "finite") -> MomentSet:
        return MomentSet(status, self.mean, self.variance,
               self.skewness, self.excess_kurtosis)


def compose_cumulants(outer: Sequence[float], inner: Sequence[float]
                     ) -> tuple[float, float, float, float]:
    """
    First four derivatives at 0 of f(g(s)) with g(0) = 0.

    Args:
        outer: f'(0)..f''''(0), the cumulants of the outer clock
        inner: g'(0)..g''''(0)
    """
    f1, f2, f3, f4 = outer
    g1, g2, g3, g4 = inner
    return (f1 * g1,
            f2 * g1 ** 2 + f1 * g2,
            f3 * g1 ** 3 + 3 * f2 * g1 * g2 + f1 * g3,
            f4 * g1 ** 4 + 6 * f3 * g1 ** 2 * g2
            + f2 * (3 * g2 ** 2 + 4 * g1 * g3) + f1 * g4)


# ========================== CHAIN ==========================
@dataclass(frozen=True)
class CompoundChain:
    """
    Outer-to-inner list of base laws; [T, U] means T(U(t)).

    The order is fixed at construction and the chain is
    immutable.
    """
    laws: tuple

    def __post_init__(self):
        laws = tuple(self.laws)
        object.__setattr__(self, "laws", laws)
        require(len(laws) >= 1, "a chain needs at least one law")
        for law in laws:
            require(isinstance(law, BASE_LAWS), "chain entries must "
                    + f"be base laws, got {type(law).__name__}")

    def __len__(self) -> int:
        return len(self.laws)

    @property
    def tags(self) -> list[str]:
        return [law.tag for law in self.laws]

    def cumulant_exponent(self, z, sweep=None) -> np.ndarray:
        out = np.asarray(z, dtype=complex)
        for law in self.laws: out = law.cumulant_exponent(out, sweep)
        return out

    def laplace_exponent(self, s):
        s = _positive_args(s, "s")
        return _scalar(-self.cumulant_exponent(-s).real)

    def chf(self, v):
        v = np.asarray(v, dtype=float)
        return _scalar(np.exp(self.cumulant_exponent(1j * v,
               sweeps(v))))

    def mgf_bound(self) -> float:
        """
        Supremum of v with E exp(v V(1)) finite, by pulling the
        innermost law's bound outward through inverse cumulant
        exponents.
        """
        bound = self.laws[-1].mgf_sup
        for law in reversed(self.laws[:-1]):
            bound = min(law.mgf_sup, law.inverse_cumulant(bound))
        return bound

    def mgf(self, v):
        v     = np.asarray(v, dtype=float)
        bound = self.mgf_bound()
        if np.any(v >= bound):
            raise DomainError(f"MGF needs v < {bound:.10g}")
        return _scalar(np.exp(self.cumulant_exponent(v).real))

    def cumulants(self) -> CumulantSet | None:
        first = self.laws[0].cumulants()
        if first is None: return None
        derivs = first
        for law in self.laws[1:]:
            outer = law.cumulants()
            if outer is None: return None
            derivs = compose_cumulants(outer, derivs)
        return CumulantSet(*derivs)

    def moments(self) -> MomentSet:
        cum = self.cumulants()
        return MomentSet.undefined() if cum is None else cum.moments()

    def pdf_grid(self, cfg: FFTConfig | None = None) -> DensityGrid:
        return chf_to_pdf_fft(self.chf, cfg)

    def sample(self, n: int, seed=None) -> np.ndarray:
        return sample_compound(self, n, seed)


def rescaled(law: BaseLaw, c: float) -> BaseLaw:
    """Law of X / c."""
    require(c > 0, "scale must be positive")
    if isinstance(law, IGParams): return IGParams(law.mu / c,
                                  law.lam / c)
    if isinstance(law, GammaParams): return GammaParams(law.alpha,
                                     law.lam * c)
    if isinstance(law, LevyStableParams): return LevyStableParams(
                                          law.b / c)
    return StableSubParams(law.alpha_half, law.delta / c)


def gauge_transform(chain: CompoundChain, c: float) -> CompoundChain:
    """
    The 2-level chain (T(c .), U / c), which has the same V(1)
    law as (T, U): time changes cannot be told apart from V.
    """
    require(len(chain) == 2, "gauge transform acts on 2-level chains")
    outer, inner = chain.laws
    return CompoundChain((outer.scaled(c), rescaled(inner, c)))


def sample_compound(chain: CompoundChain, n: int, seed=None
                   ) -> np.ndarray:
    """
    Draws V(1) by sampling the innermost clock at time 1 and
    feeding each draw as the time argument of the next law out.
    """
    require(n >= 1, "n must be >= 1")
    rng = rng_from(seed)
    u   = np.ones(n)
    for law in reversed(chain.laws): u = law.sample_at(u, rng)
    return u


# ========================= STABLE ==========================
@dataclass(frozen=True)
class TauStableParams:
    tau: float
    B:   float

    def __post_init__(self):
        require(np.isfinite(self.tau) and self.tau >= 0,
                "tau must be >= 0")
        require(np.isfinite(self.B) and self.B > 0, "B must be > 0")


def tau_from_tail(alpha: float) -> float:
    """tau such that the tau-compounded clock is alpha-stable."""
    require(0 < alpha <= 1, "alpha must lie in (0, 1]")
    return -math.log(alpha) / math.log(2)


def double_stable_laplace_exponent(outer: StableSubParams | float,
                                   inner: LevyStableParams, s):
    """
    sqrt(2 b_U) (delta_T s)^(alpha_T/4): an alpha_T/4-stable law.

    A bare positive number as `outer` is the drift clock
    T(t) = delta_T t, the alpha_T/2 = 1 end of the family.
    """
    s = _positive_args(s, "s")
    if isinstance(outer, StableSubParams):
        delta, power = outer.delta, outer.alpha_half / 2
    else:
        delta, power = float(outer), 0.5
        require(np.isfinite(delta) and delta > 0, "drift clock rate "
                + "must be > 0")
    return _scalar(math.sqrt(2 * inner.b) * (delta * s) ** power)


def n_stable_laplace_exponent(bs: Sequence[LevyStableParams], s):
    """
    s^(2^-n) prod_k (2 b_k)^(2^-k), with b_1 the innermost clock
    (the one running on calendar time) and b_n the outermost.
    """
    require(len(bs) >= 1, "need at least one level")
    s   = _positive_args(s, "s")
    out = s ** (2.0 ** -len(bs))
    for k, law in enumerate(bs, start=1):
        out = out * (2 * law.b) ** (2.0 ** -k)
    return _scalar(out)


def n_stable_chain(bs: Sequence[LevyStableParams]) -> CompoundChain:
    """The chain (outer-to-inner) of n_stable_laplace_exponent."""
    return CompoundChain(tuple(reversed(list(bs))))


def tau_stable_laplace_exponent(p: TauStableParams, s):
    s = _positive_args(s, "s")
    e = 2.0 ** -p.tau
    return _scalar(s ** e * (2 * p.B) ** (1 - e))


# ========================== GAMMA ==========================
def double_gamma_mgf_bound(outer: GammaParams, inner: GammaParams
                          ) -> float:
    return outer.lam * -math.expm1(-inner.lam / outer.alpha)


def double_gamma_mgf(outer: GammaParams, inner: GammaParams, v):
    v     = np.asarray(v, dtype=float)
    bound = double_gamma_mgf_bound(outer, inner)
    if np.any(v >= bound):
        raise DomainError(f"double gamma MGF needs v < {bound:.10g}")
    base = 1 + (outer.alpha / inner.lam) * np.log1p(-v / outer.lam)
    return _scalar(base ** -inner.alpha)


def _u_range(frozen, x_hint: float | None = None) -> tuple:
    lo, hi = frozen.ppf(1e-15), frozen.isf(1e-15)
    lo     = max(lo, np.finfo(float).tiny)
    points = [frozen.mean()]
    if x_hint is not None and lo < x_hint < hi: points.append(x_hint)
    return lo, hi, sorted(set(points))


def double_gamma_pdf(outer: GammaParams, inner: GammaParams, x
                    ) -> float:
    """
    Mixture int_0^inf Gamma(x; alpha_T u, lambda_T) f_U(u) du,
    integrated in ln u between the 1e-15 tail quantiles of U.
    """
    x = float(_positive_args(x))
    lo, hi, pts = _u_range(gamma_frozen(inner), outer.lam * x
                  / outer.alpha)

    def integrand(u: float) -> float:
        return math.exp(gamma_logpdf(outer.scaled(u), x)
               + gamma_logpdf(inner, u))

    return adaptive_quad(integrand, lo, hi, tol=1e-10, rtol=1e-8,
           log_scale=True, points=pts).value


def double_gamma_cdf(outer: GammaParams, inner: GammaParams, x
                    ) -> float:
    x = float(_positive_args(x))
    lo, hi, pts = _u_range(gamma_frozen(inner))

    def integrand(u: float) -> float:
        return special.gammainc(outer.alpha * u, outer.lam * x) \
             * math.exp(gamma_logpdf(inner, u))

    value = adaptive_quad(integrand, lo, hi, tol=1e-10, rtol=1e-8,
            log_scale=True, points=pts).value
    return min(1.0, value)


def double_gamma_moments(outer: GammaParams, inner: GammaParams
                        ) -> MomentSet:
    aT, lT, aU, lU = outer.alpha, outer.lam, inner.alpha, inner.lam
    mean  = (aT / lT) * (aU / lU)
    var   = (aT / lT ** 2) * (aU / lU ** 2) * (aT + lU)
    skew  = (2 * aT ** 2 + 3 * aT * lU + 2 * lU ** 2) \
          / (math.sqrt(aT * aU) * (aT + lU) ** 1.5)
    kurt  = (6 * aT ** 3 + 12 * aT ** 2 * lU + 11 * aT * lU ** 2
          + 6 * lU ** 3) / (aT * aU * (aT + lU) ** 2)
    return MomentSet("finite", mean, var, skew, kurt)


def multi_gamma_mgf(chain: Sequence[GammaParams], v):
    """
    M_n(v) = (1 - ln M_{n-1}(v) / lambda_n)^(-alpha_n), level 1
    first (the outermost clock).
    """
    chain = CompoundChain(tuple(chain))
    for law in chain.laws:
        require(isinstance(law, GammaParams), "multi-gamma chains "
                + "hold gamma laws only")
    v     = np.asarray(v, dtype=float)
    bound = chain.mgf_bound()
    if np.any(v >= bound):
        raise DomainError(f"multi-gamma MGF needs v < {bound:.10g}")
    first = chain.laws[0]
    out   = (1 - v / first.lam) ** -first.alpha
    for law in chain.laws[1:]:
        out = (1 - np.log(out) / law.lam) ** -law.alpha
    return _scalar(out)


def multi_gamma_mgf_bound(chain: Sequence[GammaParams]) -> float:
    return CompoundChain(tuple(chain)).mgf_bound()


def multi_gamma_cumulants(chain: Sequence[GammaParams]) -> CumulantSet:
    """
    Level-by-level cumulant recursion; with c = alpha_n/lambda_n:

        k1' = c k1
        k2' = c (k1^2/lambda_n + k2)
        k3' = c (2 k1^3/lambda_n^2 + 3 k1 k2/lambda_n + k3)
        k4' = c (6 k1^4/lambda_n^3 + 12 k1^2 k2/lambda_n^2
                 + (3 k2^2 + 4 k1 k3)/lambda_n + k4)
    """
    chain = list(chain)
    require(len(chain) >= 1, "need at least one level")
    k1, k2, k3, k4 = chain[0].cumulants()
    for law in chain[1:]:
        a, l = law.alpha, law.lam
        c    = a / l
        k1, k2, k3, k4 = (
            c * k1,
            c * (k1 ** 2 / l + k2),
            c * (2 * k1 ** 3 / l ** 2 + 3 * k1 * k2 / l + k3),
            c * (6 * k1 ** 4 / l ** 3 + 12 * k1 ** 2 * k2 / l ** 2
                 + (3 * k2 ** 2 + 4 * k1 * k3) / l + k4))
    return CumulantSet(k1, k2, k3, k4)


# =========================== IG ============================
def double_ig_mgf_bound(outer: IGParams, inner: IGParams) -> float:
    mT, lT, mU, lU = outer.mu, outer.lam, inner.mu, inner.lam
    c = lU * mT / (2 * mU ** 2 * lT)
    if c >= 1: return lT / (2 * mT ** 2)
    return lT / (2 * mT ** 2) * (1 - (1 - c) ** 2)


def double_ig_mgf(outer: IGParams, inner: IGParams, v):
    v     = np.asarray(v, dtype=float)
    bound = double_ig_mgf_bound(outer, inner)
    if np.any(v >= bound):
        raise DomainError(f"double IG MGF needs v < {bound:.10g}")
    return _scalar(_double_ig(outer, inner, v + 0j).real)


def double_ig_chf(outer: IGParams, inner: IGParams, v):
    v = np.asarray(v, dtype=float)
    return _scalar(_double_ig(outer, inner, 1j * v, sweeps(v)))


def _double_ig(outer: IGParams, inner: IGParams, z, sweep=None):
    mT, lT, mU, lU = outer.mu, outer.lam, inner.mu, inner.lam
    r_in  = tracked_sqrt(1 - 2 * mT ** 2 * z / lT, sweep)
    r_out = tracked_sqrt(1 - 2 * (mU ** 2 / lU) * (lT / mT)
            * (1 - r_in), sweep)
    return np.exp((lU / mU) * (1 - r_out))


def double_ig_pdf(outer: IGParams, inner: IGParams, x) -> float:
    """
    Mixture int_0^inf IG(x; mu_T u, lambda_T u^2) IG(u; mu_U,
    lambda_U) du, integrated in ln u.
    """
    x = float(_positive_args(x))
    lo, hi, pts = _u_range(ig_frozen(inner), x / outer.mu)

    def integrand(u: float) -> float:
        return math.exp(ig_logpdf(outer.scaled(u), x)
               + ig_logpdf(inner, u))

    return adaptive_quad(integrand, lo, hi, tol=1e-10, rtol=1e-8,
           log_scale=True, points=pts).value


def double_ig_moments(outer: IGParams, inner: IGParams) -> MomentSet:
    mT, lT, mU, lU = outer.mu, outer.lam, inner.mu, inner.lam
    k1 = mT * mU
    a  = mU ** 2 * mT / lU
    b  = mT ** 2 / lT
    k2 = mU ** 3 * mT ** 2 / lU + mT ** 3 * mU / lT
    k3 = 3 * k1 * (a * a + a * b + b * b)
    k4 = k1 * (15 * a ** 3 + 18 * a * a * b + 15 * a * b * b
       + 15 * b ** 3)
    return MomentSet("finite", k1, k2, k3 / k2 ** 1.5, k4 / k2 ** 2)


def multi_ig_chf(chain: Sequence[IGParams], v):
    """
    phi_n(v) = exp((lambda_n/mu_n)(1 - sqrt(1 - (2 mu_n^2/lambda_n)
    ln phi_{n-1}(v)))), level 1 (outermost) first.
    """
    chain = list(chain)
    require(len(chain) >= 1, "need at least one level")
    v     = np.asarray(v, dtype=float)
    sweep = sweeps(v)
    expo  = 1j * v + 0j
    for law in chain: expo = law.cumulant_exponent(expo, sweep)
    return _scalar(np.exp(expo))


def multi_ig_mgf(chain: Sequence[IGParams], v):
    return CompoundChain(tuple(chain)).mgf(v)


def multi_ig_cumulants(chain: Sequence[IGParams]) -> CumulantSet:
    return CompoundChain(tuple(chain)).cumulants()
