import math

import numpy as np
from scipy import stats

from subclock.behavioral import (
    PWFSpec,
    general_pwf,
    gumbel_cdf,
    invert_cdf,
    prelec_pwf,
    tk_pwf,
)
from subclock.errors import DomainError, InversionError
from subclock.laws.logprice import ReturnLaw, single_subordinated, two_level
from subclock.laws.subordinators import IGParams
from subclock.numerics import chf_to_pdf_fft
from subclock.test.harness import TestCase


U = np.linspace(0.0, 1.0, 101)


class TestTverskyKahneman(TestCase):

    def test_endpoints(self):
        for gamma in (0.0, 0.3, 0.61, 1.0):
            assert tk_pwf(gamma, 0.0) == 0.0
            assert tk_pwf(gamma, 1.0) == 1.0

    def test_inverse_s_shape(self):
        assert tk_pwf(0.61, 0.01) > 0.01
        assert tk_pwf(0.61, 0.9) < 0.9

    def test_unit_curvature_is_identity(self):
        self.assertClose(tk_pwf(1.0, U), U, atol=1e-15)

    def test_zero_curvature(self):
        w = tk_pwf(0.0, U)
        assert np.all(w[1:-1] == 0.0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            tk_pwf(1.5, 0.5)
        with self.assertRaises(DomainError):
            tk_pwf(0.5, 1.2)


class TestPrelec(TestCase):

    def test_fixed_point(self):
        for rho in (0.3, 0.65, 0.9):
            self.assertClose(prelec_pwf(1.0, rho, 1 / math.e), 1 / math.e)

    def test_endpoints(self):
        w = prelec_pwf(0.8, 0.65, U)
        assert w[0] == 0.0 and w[-1] == 1.0
        assert np.all(np.diff(w) >= 0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            prelec_pwf(0.0, 0.5, 0.5)
        with self.assertRaises(DomainError):
            prelec_pwf(1.0, 1.0, 0.5)


class TestGumbel(TestCase):

    def test_values(self):
        self.assertClose(gumbel_cdf(0.0, 1.0, 0.0), math.exp(-1.0))
        self.assertClose(gumbel_cdf(2.0, 3.0, [-1e6, 1e6]), [0.0, 1.0])
        with self.assertRaises(DomainError):
            gumbel_cdf(0.0, -1.0, 0.0)


class TestGeneral(TestCase):

    def test_same_law_is_identity(self):
        grid = chf_to_pdf_fft(lambda v: np.exp(-0.5 * np.asarray(v) ** 2))
        u    = np.linspace(0.02, 0.98, 25)
        self.assertClose(general_pwf(grid, grid, u), u, atol=1e-6)

    def test_normal_callables(self):
        u = np.array([0.01, 0.1, 0.5, 0.8, 0.99])
        w = general_pwf(stats.norm.cdf, stats.norm(scale=2.0).cdf, u)
        self.assertClose(w, stats.norm.cdf(stats.norm.ppf(u) / 2),
                         atol=1e-8)

    def test_nested_clock_is_narrower(self):
        law    = ReturnLaw(two_level(0.0, 0.0, -0.281, 0.252,
                           IGParams(0.122, 12.54),
                           IGParams(0.0035, 17.66)), "NCIG")
        single = single_subordinated(law)
        u = np.array([0.01, 0.03, 0.1])
        assert np.all(general_pwf(law, single, u) > u)

    def test_open_interval(self):
        with self.assertRaises(DomainError):
            general_pwf(stats.norm.cdf, stats.norm.cdf, [0.0, 0.5])

    def test_unbracketed_inverse(self):
        with self.assertRaises(InversionError):
            invert_cdf(lambda x: 0.3, 0.5)


class TestPWFSpec(TestCase):

    def test_weighting_checks(self):
        assert PWFSpec("TK", gamma=0.61).is_weighting()
        assert PWFSpec("Prelec", delta=1.0, rho=0.65).is_weighting()
        general = PWFSpec("General", cdf_r=stats.norm.cdf,
                          cdf_s=stats.norm(scale=1.5).cdf)
        assert general.is_weighting(n=51)

    def test_dispatch(self):
        spec = PWFSpec("TK", gamma=0.61)
        self.assertClose(spec(0.3), tk_pwf(0.61, 0.3))

    def test_invalid(self):
        for kwargs in ({"family": "Kahneman"}, {"family": "TK"},
                       {"family": "Prelec", "delta": 1.0, "rho": 1.2},
                       {"family": "General", "cdf_r": stats.norm.cdf}):
            with self.assertRaises(DomainError):
                PWFSpec(**kwargs)
