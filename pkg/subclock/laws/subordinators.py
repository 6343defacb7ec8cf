"""
Base one-dimensional subordinator laws: alpha/2-stable,
Levy-stable (one-sided 1/2-stable), gamma and inverse Gaussian.

Each law carries its cumulant exponent K(z) = ln E exp(z X(1)),
defined for complex z with Re z <= 0 and for real z below the
law's exponential-moment bound. Compound chains and log-price
laws are built by composing these exponents.
"""
# ========================= STANDARDS =======================
from dataclasses import dataclass
import math

# ======================= THIRD-PARTIES =====================
from scipy import special, stats
import numpy as np

# ========================== LOCALS =========================
from ..numerics import tracked_sqrt, tracked_log, adaptive_quad
from ..errors import DomainError, require
from ..utils import rng_from


def _positive(name: str, value: float) -> None:
    require(np.isfinite(value) and value > 0,
            f"{name} must be a finite positive number, got {value}")


def _positive_args(x, what: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise DomainError(f"{what} must be > 0")
    return x


def _scalar(out):
    return out.item() if np.ndim(out) == 0 else out


# ========================== LAWS ===========================
@dataclass(frozen=True)
class StableSubParams:
    """
    Positive alpha/2-stable subordinator with Laplace transform
    exp(-(delta s)^alpha_half), 0 < alpha_half < 1.
    """
    alpha_half: float
    delta:      float
    tag = "stable"

    def __post_init__(self):
        require(0 < self.alpha_half < 1, "alpha_half must lie in "
                + f"(0, 1), got {self.alpha_half}")
        _positive("delta", self.delta)

    @property
    def mgf_sup(self) -> float:
        return 0.0

    def cumulant_exponent(self, z, sweep=None) -> np.ndarray:
        w = -self.delta * np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            power = np.where(w == 0, 0.0, np.exp(self.alpha_half
                    * tracked_log(np.where(w == 0, 1.0, w), sweep)))
        return -power

    def inverse_cumulant(self, y: float) -> float:
        return 0.0

    def cumulants(self):
        return None

    def scaled(self, u: float) -> "StableSubParams":
        return StableSubParams(self.alpha_half, self.delta * u
               ** (1 / self.alpha_half))

    def sample_at(self, u, rng) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.delta * u ** (1 / self.alpha_half) \
             * _positive_stable(self.alpha_half, u.shape, rng)


@dataclass(frozen=True)
class LevyStableParams:
    """Levy (one-sided 1/2-stable) law, Laplace exp(-sqrt(2 b s))."""
    b:  float
    tag = "levy-stable"

    def __post_init__(self):
        _positive("b", self.b)

    @property
    def mgf_sup(self) -> float:
        return 0.0

    @property
    def as_stable(self) -> StableSubParams:
        # exp(-(delta s)^(1/2)) = exp(-sqrt(2 b s)) at delta = 2 b
        return StableSubParams(0.5, 2.0 * self.b)

    def cumulant_exponent(self, z, sweep=None) -> np.ndarray:
        return -tracked_sqrt(-2.0 * self.b * np.asarray(z,
               dtype=complex), sweep)

    def inverse_cumulant(self, y: float) -> float:
        return 0.0

    def cumulants(self):
        return None

    def scaled(self, u: float) -> "LevyStableParams":
        return LevyStableParams(self.b * u * u)

    def sample_at(self, u, rng) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        z = rng.standard_normal(u.shape)
        return self.b * u * u / (z * z)


@dataclass(frozen=True)
class GammaParams:
    alpha:  float
    lam:    float
    tag = "gamma"

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _positive("lambda", self.lam)

    @property
    def mgf_sup(self) -> float:
        return self.lam

    def cumulant_exponent(self, z, sweep=None) -> np.ndarray:
        return -self.alpha * tracked_log(1.0 - np.asarray(z,
               dtype=complex) / self.lam, sweep)

    def inverse_cumulant(self, y: float) -> float:
        if y == math.inf: return self.lam
        return self.lam * -math.expm1(-y / self.alpha)

    def cumulants(self) -> tuple[float, ...]:
        a, l = self.alpha, self.lam
        return (a / l, a / l ** 2, 2 * a / l ** 3, 6 * a / l ** 4)

    def scaled(self, u: float) -> "GammaParams":
        return GammaParams(self.alpha * u, self.lam)

    def sample_at(self, u, rng) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return rng.gamma(self.alpha * u, 1.0 / self.lam)


@dataclass(frozen=True)
class IGParams:
    mu:     float
    lam:    float
    tag = "ig"

    def __post_init__(self):
        _positive("mu", self.mu)
        _positive("lambda", self.lam)

    @property
    def mgf_sup(self) -> float:
        return self.lam / (2 * self.mu ** 2)

    def cumulant_exponent(self, z, sweep=None) -> np.ndarray:
        m, l = self.mu, self.lam
        root = tracked_sqrt(1.0 - 2 * m * m * np.asarray(z,
               dtype=complex) / l, sweep)
        return (l / m) * (1.0 - root)

    def inverse_cumulant(self, y: float) -> float:
        m, l = self.mu, self.lam
        if y >= l / m: return self.mgf_sup
        return self.mgf_sup * (1.0 - (1.0 - y * m / l) ** 2)

    def cumulants(self) -> tuple[float, ...]:
        m, l = self.mu, self.lam
        return (m, m ** 3 / l, 3 * m ** 5 / l ** 2,
                15 * m ** 7 / l ** 3)

    def scaled(self, u: float) -> "IGParams":
        return IGParams(self.mu * u, self.lam * u * u)

    def sample_at(self, u, rng) -> np.ndarray:
        # T(u) ~ IG(mu u, lam u^2); numpy's wald draws IG by the
        # transformation-with-roots method
        u   = np.asarray(u, dtype=float)
        out = np.zeros(u.shape)
        hit = u > 0
        out[hit] = rng.wald(self.mu * u[hit], self.lam
                   * u[hit] ** 2)
        return out


BaseLaw = StableSubParams | LevyStableParams | GammaParams | IGParams


def _positive_stable(alpha: float, shape, rng) -> np.ndarray:
    # uniform/exponential construction of a totally skewed stable
    # variate with Laplace transform exp(-s^alpha)
    theta = rng.uniform(0.0, math.pi, shape)
    e     = rng.standard_exponential(shape)
    head  = np.sin(alpha * theta) / np.sin(theta) ** (1 / alpha)
    tail  = (np.sin((1 - alpha) * theta) / e) ** ((1 - alpha)
          / alpha)
    return head * tail


def stable_sub_from_tail(alpha_T: float, delta: float
                        ) -> StableSubParams:
    """Stable clock from the tail index alpha_T in (0, 2) of B_T."""
    require(0 < alpha_T < 2, "alpha_T must lie in (0, 2)")
    return StableSubParams(alpha_T / 2, delta)


# ======================== OPERATIONS =======================
def stable_laplace(p: StableSubParams, s):
    s = _positive_args(s, "s")
    return _scalar(np.exp(-(p.delta * s) ** p.alpha_half))


def levy_stable_laplace(p: LevyStableParams, s):
    s = _positive_args(s, "s")
    return _scalar(np.exp(-np.sqrt(2 * p.b * s)))


def gamma_laplace(p: GammaParams, s):
    s = _positive_args(s, "s")
    return _scalar((1 + s / p.lam) ** -p.alpha)


def ig_laplace(p: IGParams, s):
    s = _positive_args(s, "s")
    return _scalar(np.exp((p.lam / p.mu) * (1 - np.sqrt(1 + 2
           * p.mu ** 2 * s / p.lam))))


def stable_fractional_moment(p: StableSubParams, order: float
                            ) -> float:
    """
    E[T(1)^order] from the Laplace transform,

        order / Gamma(1 - order) * int_0^inf (1 - L(s)) s^(-order-1) ds

    The integral is split at s = 1: the head is integrated in
    t = -ln s and the tail is integrated up to the point S where
    L(S) < 1e-14, beyond which it equals S^(-order)/order.

    Raises:
        DomainError: order outside (0, alpha_half)
        QuadratureError: tolerance not met
    """
    a, d = p.alpha_half, p.delta
    require(0 < order < a, f"order must lie in (0, {a}), got "
            + f"{order}")

    one_minus = lambda s: -math.expm1(-(d * s) ** a)
    head = adaptive_quad(lambda t: one_minus(math.exp(-t))
           * math.exp(order * t), 0.0, math.inf, tol=1e-13)
    stop = max(1.0, (-math.log(1e-14)) ** (1 / a) / d)
    body = adaptive_quad(lambda s: one_minus(s) * s ** (-order - 1),
           1.0, stop, tol=1e-13) if stop > 1 else None
    tail = stop ** -order / order
    total = head.value + (body.value if body else 0.0) + tail
    return order / math.gamma(1 - order) * total


def stable_fractional_moment_exact(p: StableSubParams, order: float
                                  ) -> float:
    """delta^p Gamma(1 - p/alpha_half) / Gamma(1 - p)."""
    require(0 < order < p.alpha_half, "order must lie in (0, "
            + f"{p.alpha_half})")
    return p.delta ** order * math.exp(math.lgamma(1 - order
           / p.alpha_half) - math.lgamma(1 - order))


def levy_stable_logpdf(p: LevyStableParams, x):
    x = _positive_args(x)
    return 0.5 * np.log(p.b / (2 * math.pi)) - 1.5 * np.log(x) \
         - p.b / (2 * x)


def levy_stable_pdf(p: LevyStableParams, x):
    return _scalar(np.exp(levy_stable_logpdf(p, x)))


def levy_stable_cdf(p: LevyStableParams, x):
    x = _positive_args(x)
    return _scalar(special.erfc(np.sqrt(p.b / (2 * x))))


def gamma_logpdf(p: GammaParams, x):
    x = _positive_args(x)
    return p.alpha * math.log(p.lam) - special.gammaln(p.alpha) \
         + (p.alpha - 1) * np.log(x) - p.lam * x


def gamma_pdf(p: GammaParams, x):
    return _scalar(np.exp(gamma_logpdf(p, x)))


def gamma_mgf(p: GammaParams, v):
    v = np.asarray(v, dtype=float)
    if np.any(v >= p.lam):
        raise DomainError(f"gamma MGF needs v < lambda = {p.lam}")
    return _scalar((1 - v / p.lam) ** -p.alpha)


def ig_logpdf(p: IGParams, x):
    x = _positive_args(x)
    m, l = p.mu, p.lam
    return 0.5 * (np.log(l / (2 * math.pi)) - 3 * np.log(x)) \
         - l * (x - m) ** 2 / (2 * m * m * x)


def ig_pdf(p: IGParams, x):
    return _scalar(np.exp(ig_logpdf(p, x)))


def ig_cdf(p: IGParams, x):
    x = _positive_args(x)
    m, l = p.mu, p.lam
    r    = np.sqrt(l / x)
    # second term as exp(2l/m + log Phi(.)) to stay finite
    return _scalar(special.ndtr(r * (x / m - 1)) + np.exp(2 * l / m
           + special.log_ndtr(-r * (x / m + 1))))


def ig_frozen(p: IGParams):
    """The same law as a scipy.stats frozen distribution."""
    return stats.invgauss(p.mu / p.lam, scale=p.lam)


def gamma_frozen(p: GammaParams):
    return stats.gamma(p.alpha, scale=1 / p.lam)


def brownian_stable_chf(p: StableSubParams, v):
    """chf of B at an independent stable clock: symmetric stable."""
    v = np.asarray(v, dtype=float)
    return _scalar(np.exp(-(p.delta * v * v / 2) ** p.alpha_half)
           + 0j)


def sample_stable_sub(p: StableSubParams, n: int, seed=None
                     ) -> np.ndarray:
    require(n >= 1, "n must be >= 1")
    rng = rng_from(seed)
    if p.alpha_half == 0.5:
        return sample_levy_stable(LevyStableParams(p.delta / 2), n,
               rng)
    return p.delta * _positive_stable(p.alpha_half, n, rng)


def sample_levy_stable(p: LevyStableParams, n: int, seed=None
                      ) -> np.ndarray:
    require(n >= 1, "n must be >= 1")
    z = rng_from(seed).standard_normal(n)
    return p.b / (z * z)


def sample_gamma(p: GammaParams, n: int, seed=None) -> np.ndarray:
    require(n >= 1, "n must be >= 1")
    return rng_from(seed).gamma(p.alpha, 1 / p.lam, n)


def sample_ig(p: IGParams, n: int, seed=None) -> np.ndarray:
    require(n >= 1, "n must be >= 1")
    return rng_from(seed).wald(p.mu, p.lam, n)
