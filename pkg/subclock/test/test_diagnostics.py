import numpy as np
from scipy import stats

from subclock.diagnostics import (
    TestResult,
    adjusted_jarque_bera,
    berkowitz_transform,
    inverse_normal_transform,
    ks_uniform_test,
    kuiper_sf,
    kuiper_test,
    pit,
    run_diagnostics,
)
from subclock.errors import DomainError, NumericWarning
from subclock.estimation import normal_mle
from subclock.estimation.models.normal import NormalLaw
from subclock.laws.logprice import ReturnLaw, two_level
from subclock.laws.subordinators import IGParams
from subclock.numerics import FFTConfig
from subclock.test.harness import TestCase, mc_size, slow


def ncig_law():
    return ReturnLaw(two_level(0.0, 0.0, -0.281, 0.252,
                     IGParams(0.122, 12.54), IGParams(0.0035, 17.66)),
                     "NCIG")


class TestUniformity(TestCase):

    def test_ks_matches_scipy(self):
        u   = self.rng().uniform(size=500)
        out = ks_uniform_test(u)
        ref = stats.kstest(u, "uniform", method="asymp")
        self.assertClose(out.statistic, ref.statistic, rtol=1e-12)
        self.assertClose(out.p_value, ref.pvalue, rtol=1e-10)
        assert out.n == 500 and out.method == "ks"

    def test_ks_rejects_shifted(self):
        u = self.rng(1).uniform(size=2000) ** 1.5
        assert not ks_uniform_test(u).passed()

    def test_kuiper(self):
        u = self.rng(2).uniform(size=2000)
        assert kuiper_test(u).p_value > 0.001
        assert kuiper_test(u ** 2).p_value < 0.01

    def test_kuiper_tail(self):
        self.assertClose(kuiper_sf(1.747), 0.05, atol=2e-3)
        assert kuiper_sf(0.1) == 1.0
        assert kuiper_sf(3.0) < kuiper_sf(2.0) < kuiper_sf(1.0)

    def test_needs_data(self):
        with self.assertRaises(DomainError):
            ks_uniform_test([0.5, 0.5])
        with self.assertRaises(DomainError):
            kuiper_test([0.1, 0.2, 0.3, 0.4, 1.5])


class TestNormality(TestCase):

    def test_normal_passes(self):
        z = self.rng().standard_normal(2000)
        assert adjusted_jarque_bera(z).p_value > 0.001

    def test_exponential_fails(self):
        z = self.rng(1).exponential(size=2000)
        assert adjusted_jarque_bera(z).p_value < 1e-6

    def test_small_or_constant(self):
        with self.assertRaises(DomainError):
            adjusted_jarque_bera(np.arange(7.0))
        with self.assertRaises(DomainError):
            adjusted_jarque_bera(np.ones(20))

    def test_inverse_normal_clamps(self):
        with self.assertWarns(NumericWarning):
            z = inverse_normal_transform([0.0, 0.5, 1.0])
        assert np.all(np.isfinite(z))
        assert z[1] == 0.0
        assert berkowitz_transform is inverse_normal_transform


class TestPIT(TestCase):

    def test_callable(self):
        x = np.array([-1.0, 0.0, 2.0])
        self.assertClose(pit(stats.norm.cdf, x), stats.norm.cdf(x))

    def test_constant_cdf(self):
        with self.assertRaises(DomainError):
            pit(lambda x: np.full(np.shape(x), 0.5), [1.0, 2.0, 3.0])

    def test_result_checks_p_value(self):
        with self.assertRaises(DomainError):
            TestResult(0.1, 1.5, 10, "ks")
        assert TestResult(0.1, 0.2, 10, "ks").to_dict()["n"] == 10


class TestRun(TestCase):

    def test_keys(self):
        data = self.rng().standard_normal(500)
        out  = run_diagnostics(stats.norm.cdf, data)
        assert set(out) == {"ks", "kuiper", "adjusted_jb"}
        assert all(isinstance(r, TestResult) for r in out.values())

    def test_normal_misfit_is_rejected(self):
        data = ncig_law().sample(5000, self.rng(1))
        p    = normal_mle(data)
        out  = run_diagnostics(NormalLaw(p["mu"], p["sigma"]).cdf, data)
        assert out["adjusted_jb"].p_value < 1e-6
        assert not out["ks"].passed()

    def test_true_law_is_calibrated(self):
        law  = ncig_law()
        data = law.sample(mc_size(100_000, 2000), self.rng(2))
        out  = run_diagnostics(law, data)
        assert out["ks"].p_value > 0.001
        assert out["kuiper"].p_value > 0.001


class TestCalibration(TestCase):

    seeds = range(50)
    n     = 10_000

    @slow
    def test_true_law_passes(self):
        grid   = ncig_law().pdf_grid(FFTConfig(2 ** 16, 0.25, center=0.0))
        passed = {"ks": 0, "kuiper": 0, "adjusted_jb": 0}
        for k in self.seeds:
            data = ncig_law().sample(self.n, self.rng(1000 + k))
            for name, result in run_diagnostics(grid, data).items():
                passed[name] += result.p_value > 0.05
        for name, count in passed.items():
            assert count >= 45, f"{name} passed {count} of 50"

    @slow
    def test_normal_misfit_rejected(self):
        rejected = 0
        for k in self.seeds:
            data = ncig_law().sample(self.n, self.rng(2000 + k))
            p    = normal_mle(data)
            out  = run_diagnostics(NormalLaw(p["mu"], p["sigma"]).cdf,
                                   data)
            rejected += out["ks"].p_value < 0.01
        assert rejected >= 45, f"rejected {rejected} of 50"
