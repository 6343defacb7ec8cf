import unittest
import math
import os

from scipy import stats
import numpy as np

__all__ = ['TestCase', 'skip', 'skipIf', 'slow', 'SLOW', 'mc_size',
           'se_distance']

skip   = unittest.skip
skipIf = unittest.skipIf
SLOW   = os.environ.get("SUBCLOCK_SLOW") == "1"


def slow(fn):
    """Runs only with SUBCLOCK_SLOW=1."""
    return unittest.skipUnless(SLOW, "set SUBCLOCK_SLOW=1")(fn)


def mc_size(full: int, reduced: int) -> int:
    return full if SLOW else reduced


class TestCase(unittest.TestCase):

    seed = 20240101

    def rng(self, offset: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.seed + offset)

    def assertClose(self, actual, expected, atol=0.0, rtol=1e-9,
                    msg=None):
        actual   = np.asarray(actual)
        expected = np.asarray(expected)
        ok = np.allclose(actual, expected, atol=atol, rtol=rtol,
             equal_nan=False)
        if not ok:
            diff = np.max(np.abs(actual - expected))
            self.fail(msg or f"not close: max |diff| {diff:.3e} "
                      f"(atol {atol:g}, rtol {rtol:g})\n"
                      f"actual:   {actual}\nexpected: {expected}")

    def assertWithinSE(self, samples, expected, k=3.0, what="mean",
                       msg=None):
        """
        Sample statistic within k standard errors of `expected`.
        `what` is mean, var or excess_kurtosis (see `se_distance`).
        """
        stat, z = se_distance(samples, expected, what)
        if z > k:
            self.fail(msg or f"{what} {stat:.6g} is {z:.2f} SE from "
                      f"{expected:.6g} (n={np.size(samples)})")

    def assertScores(self, scores, k=3.0, misses=1, cap=5.0, msg=None):
        """
        SE distances from many independent checks: at most `misses`
        beyond k and none beyond `cap`.
        """
        scores = np.asarray(scores, dtype=float)
        beyond = int(np.sum(scores > k))
        if beyond > misses or np.max(scores) > cap:
            self.fail(msg or f"{beyond} of {scores.size} checks beyond "
                      f"{k:g} SE, worst {np.max(scores):.2f}")


def se_distance(samples, expected, what="mean", batches=20
               ) -> tuple[float, float]:
    """
    (statistic, |statistic - expected| / SE). Mean and variance
    use the delta-method SE; excess kurtosis is the average over
    `batches` equal slices with the SE of that average.
    """
    x = np.asarray(samples, dtype=float).ravel()
    n = x.size
    if what == "mean":
        stat = x.mean()
        se   = x.std(ddof=1) / math.sqrt(n)
    elif what == "var":
        d    = x - x.mean()
        stat = d.var(ddof=1)
        m4   = np.mean(d ** 4)
        se   = math.sqrt(max(m4 - stat ** 2, 0.0) / n)
    elif what == "excess_kurtosis":
        parts = stats.kurtosis(x[:n - n % batches].reshape(batches, -1),
                axis=1, bias=False)
        stat  = float(np.mean(parts))
        se    = float(np.std(parts, ddof=1)) / math.sqrt(batches)
    else: raise ValueError(what)
    return float(stat), float(abs(stat - expected) / se)
