import numpy as np

from subclock.errors import DomainError
from subclock.laws.compound import (
    CompoundChain,
    TauStableParams,
    compose_cumulants,
    double_gamma_cdf,
    double_gamma_mgf,
    double_gamma_mgf_bound,
    double_gamma_moments,
    double_gamma_pdf,
    double_ig_chf,
    double_ig_mgf,
    double_ig_mgf_bound,
    double_ig_moments,
    double_ig_pdf,
    double_stable_laplace_exponent,
    gauge_transform,
    multi_gamma_cumulants,
    multi_gamma_mgf,
    multi_gamma_mgf_bound,
    multi_ig_chf,
    multi_ig_cumulants,
    multi_ig_mgf,
    n_stable_chain,
    n_stable_laplace_exponent,
    tau_from_tail,
    tau_stable_laplace_exponent,
)
from subclock.laws.subordinators import (
    GammaParams,
    IGParams,
    LevyStableParams,
    StableSubParams,
)
from subclock.test.harness import TestCase, mc_size, se_distance, slow


GRID = np.linspace(-20.0, 20.0, 201)


class TestComposition(TestCase):

    def test_identity_inner(self):
        outer = (1.5, 0.3, -0.2, 4.0)
        assert compose_cumulants(outer, (1.0, 0.0, 0.0, 0.0)) == outer

    def test_chain_order_is_kept(self):
        T, U  = GammaParams(2.0, 3.0), IGParams(1.0, 2.0)
        chain = CompoundChain([T, U])
        assert chain.laws == (T, U)
        assert chain.tags == ["gamma", "ig"]
        assert len(chain) == 2

    def test_chain_rejects_empty_and_foreign(self):
        with self.assertRaises(DomainError):
            CompoundChain(())
        with self.assertRaises(DomainError):
            CompoundChain((GammaParams(1.0, 1.0), "ig"))


class TestDoubleIG(TestCase):

    def test_unit_parameters(self):
        m = double_ig_moments(IGParams(1, 1), IGParams(1, 1))
        self.assertClose(m.mean, 1.0)
        self.assertClose(m.variance, 2.0)
        self.assertClose(m.skewness, 3.1819, atol=1e-4)
        self.assertClose(m.excess_kurtosis, 15.75, rtol=1e-12)

    def test_closed_form_matches_chain(self):
        T, U  = IGParams(2.05, 20.1), IGParams(172.7, 323.6)
        exact = double_ig_moments(T, U)
        chain = CompoundChain((T, U)).moments()
        for name in ("mean", "variance", "skewness", "excess_kurtosis"):
            self.assertClose(getattr(chain, name), getattr(exact, name),
                             rtol=1e-10)
        self.assertClose(multi_ig_cumulants([T, U]).as_tuple(),
                         CompoundChain((T, U)).cumulants().as_tuple(),
                         rtol=1e-12)

    def test_chf_specializations(self):
        T, U  = IGParams(0.8, 1.7), IGParams(1.3, 0.9)
        chain = CompoundChain((T, U))
        exact = double_ig_chf(T, U, GRID)
        self.assertClose(chain.chf(GRID), exact, rtol=0, atol=1e-12)
        self.assertClose(multi_ig_chf([T, U], GRID), exact, rtol=0,
                         atol=1e-12)

    def test_chf_is_continuous(self):
        T, U = IGParams(1.0, 0.2), IGParams(1.0, 0.3)
        v    = np.linspace(0.0, 200.0, 40001)
        phi  = double_ig_chf(T, U, v)
        assert np.max(np.abs(np.diff(phi))) < 0.05
        assert np.all(np.abs(phi) <= 1 + 1e-12)

    def test_mgf_bound_both_branches(self):
        for T, U in ((IGParams(1.0, 1.0), IGParams(1.0, 1.0)),
                     (IGParams(1.0, 1.0), IGParams(1.0, 50.0))):
            chain = CompoundChain((T, U))
            self.assertClose(double_ig_mgf_bound(T, U),
                             chain.mgf_bound(), rtol=1e-12)
            v = 0.5 * chain.mgf_bound()
            self.assertClose(double_ig_mgf(T, U, v), chain.mgf(v),
                             rtol=1e-12)
            self.assertClose(multi_ig_mgf([T, U], v), chain.mgf(v),
                             rtol=1e-12)
            with self.assertRaises(DomainError):
                double_ig_mgf(T, U, chain.mgf_bound())

    def test_pdf_direct_vs_fft(self):
        T, U = IGParams(1.0, 4.0), IGParams(2.0, 20.0)
        grid = CompoundChain((T, U)).pdf_grid()
        for x in (1.0, 1.5, 2.0, 2.5, 3.5):
            self.assertClose(grid.pdf(x), double_ig_pdf(T, U, x),
                             rtol=0, atol=1e-3)


class TestDoubleGamma(TestCase):

    T = GammaParams(2.0, 2.0)
    U = GammaParams(20.0, 10.0)

    def test_closed_form_matches_chain(self):
        exact = double_gamma_moments(self.T, self.U)
        chain = CompoundChain((self.T, self.U)).moments()
        self.assertClose(exact.mean, 2.0)
        self.assertClose(exact.variance, 1.2)
        for name in ("mean", "variance", "skewness", "excess_kurtosis"):
            self.assertClose(getattr(chain, name), getattr(exact, name),
                             rtol=1e-10)

    def test_mgf(self):
        chain = CompoundChain((self.T, self.U))
        bound = double_gamma_mgf_bound(self.T, self.U)
        self.assertClose(bound, chain.mgf_bound(), rtol=1e-12)
        v = np.array([-1.0, 0.0, 0.3, 0.9 * bound])
        self.assertClose(double_gamma_mgf(self.T, self.U, v),
                         chain.mgf(v), rtol=1e-12)
        self.assertClose(double_gamma_mgf(self.T, self.U, 0.0), 1.0)
        with self.assertRaises(DomainError):
            double_gamma_mgf(self.T, self.U, bound)

    def test_pdf_and_cdf_vs_fft(self):
        grid = CompoundChain((self.T, self.U)).pdf_grid()
        for x in (0.8, 1.4, 2.0, 2.7, 3.6):
            self.assertClose(grid.pdf(x),
                             double_gamma_pdf(self.T, self.U, x),
                             rtol=0, atol=1e-3)
            self.assertClose(grid.cdf_at(x),
                             double_gamma_cdf(self.T, self.U, x),
                             rtol=0, atol=1e-3)

    def test_pdf_integrates_to_one(self):
        grid = CompoundChain((self.T, self.U)).pdf_grid()
        self.assertClose(grid.mass(), 1.0, atol=1e-4)


class TestMultiGamma(TestCase):

    chain = [GammaParams(2.0, 3.0), GammaParams(1.5, 0.8),
             GammaParams(4.0, 2.5)]

    def test_cumulant_recursion(self):
        self.assertClose(multi_gamma_cumulants(self.chain).as_tuple(),
                         CompoundChain(tuple(self.chain)).cumulants()
                         .as_tuple(), rtol=1e-12)

    def test_two_levels_match_double(self):
        T, U = self.chain[:2]
        m = multi_gamma_cumulants([T, U]).moments()
        d = double_gamma_moments(T, U)
        self.assertClose(m.excess_kurtosis, d.excess_kurtosis,
                         rtol=1e-10)

    def test_mgf_against_chain(self):
        chain = CompoundChain(tuple(self.chain))
        bound = chain.mgf_bound()
        assert 0 < bound < self.chain[0].lam
        assert multi_gamma_mgf_bound(self.chain) == bound
        v = np.array([-2.0, 0.1, 0.5 * bound, 0.99 * bound])
        self.assertClose(multi_gamma_mgf(self.chain, v), chain.mgf(v),
                         rtol=1e-10)
        with self.assertRaises(DomainError):
            multi_gamma_mgf(self.chain, bound)

    def test_rejects_mixed_chain(self):
        with self.assertRaises(DomainError):
            multi_gamma_mgf([GammaParams(1.0, 1.0), IGParams(1.0, 1.0)],
                            0.1)


class TestStableChains(TestCase):

    s = np.array([0.05, 1.0, 7.0, 300.0])

    def test_double_stable(self):
        T = StableSubParams(0.8, 1.3)
        U = LevyStableParams(0.6)
        self.assertClose(double_stable_laplace_exponent(T, U, self.s),
                         CompoundChain((T, U)).laplace_exponent(self.s),
                         rtol=1e-12)

    def test_double_stable_on_drift_clock(self):
        U = LevyStableParams(0.5)
        self.assertClose(double_stable_laplace_exponent(1.0, U, 4.0), 2.0)
        self.assertClose(double_stable_laplace_exponent(2.5, U, self.s),
                         np.sqrt(2.5 * self.s), rtol=1e-12)
        with self.assertRaises(DomainError):
            double_stable_laplace_exponent(0.0, U, 1.0)

    def test_n_stable(self):
        bs = [LevyStableParams(0.5), LevyStableParams(1.2),
              LevyStableParams(0.3)]
        self.assertClose(n_stable_laplace_exponent(bs, self.s),
                         n_stable_chain(bs).laplace_exponent(self.s),
                         rtol=1e-12)

    def test_tau_matches_integer_depth(self):
        for n in (1, 2, 3):
            bs = [LevyStableParams(0.7)] * n
            self.assertClose(
                tau_stable_laplace_exponent(TauStableParams(n, 0.7),
                                            self.s),
                n_stable_laplace_exponent(bs, self.s), rtol=1e-12)

    def test_tau_from_tail(self):
        self.assertClose(tau_from_tail(0.25), 2.0)
        self.assertClose(tau_from_tail(1.0), 0.0, atol=1e-15)
        with self.assertRaises(DomainError):
            tau_from_tail(1.5)
        with self.assertRaises(DomainError):
            TauStableParams(-1.0, 1.0)

    def test_stable_chain_has_no_mgf(self):
        chain = CompoundChain((StableSubParams(0.7, 1.0),
                               LevyStableParams(1.0)))
        assert chain.mgf_bound() == 0.0
        with self.assertRaises(DomainError):
            chain.mgf(0.1)


class TestGauge(TestCase):

    def test_transform_keeps_law(self):
        for chain in (CompoundChain((IGParams(2.05, 20.1),
                                     IGParams(172.7, 323.6))),
                      CompoundChain((GammaParams(2.0, 2.0),
                                     GammaParams(20.0, 10.0))),
                      CompoundChain((StableSubParams(0.7, 1.0),
                                     LevyStableParams(0.4)))):
            moved = gauge_transform(chain, 3.7)
            assert moved.laws != chain.laws
            v = np.linspace(-2.0, 2.0, 41) / max(1.0, chain.laws[0].mu
                * chain.laws[1].mu if hasattr(chain.laws[0], "mu")
                else 1.0)
            self.assertClose(moved.chf(v), chain.chf(v), rtol=0,
                             atol=1e-12)

    def test_needs_two_levels(self):
        with self.assertRaises(DomainError):
            gauge_transform(CompoundChain((IGParams(1, 1),)), 2.0)


class TestSampling(TestCase):

    def test_double_gamma_moments(self):
        T, U = GammaParams(2.0, 2.0), GammaParams(20.0, 10.0)
        x = CompoundChain((T, U)).sample(mc_size(1_000_000, 200_000),
                                         self.rng())
        m = double_gamma_moments(T, U)
        self.assertWithinSE(x, m.mean)
        self.assertWithinSE(x, m.variance, what="var")

    def test_double_ig_moments(self):
        T, U = IGParams(1.0, 4.0), IGParams(2.0, 20.0)
        x = CompoundChain((T, U)).sample(mc_size(1_000_000, 200_000),
                                         self.rng(1))
        m = double_ig_moments(T, U)
        self.assertWithinSE(x, m.mean)
        self.assertWithinSE(x, m.variance, what="var")

    def test_double_gamma_random_draws(self):
        def draw(rng):
            alpha_U = rng.uniform(5.0, 30.0)
            return (GammaParams(rng.uniform(2, 5), rng.uniform(1, 4)),
                    GammaParams(alpha_U, alpha_U * rng.uniform(0.5, 2)))
        self.assertScores(self.draw_scores(draw, double_gamma_moments,
                          300), misses=2)

    def test_double_ig_random_draws(self):
        def draw(rng):
            return (IGParams(rng.uniform(0.5, 1.5), rng.uniform(5, 15)),
                    IGParams(rng.uniform(0.8, 2.0), rng.uniform(5, 20)))
        self.assertScores(self.draw_scores(draw, double_ig_moments, 400),
                          misses=2)

    def draw_scores(self, draw, moments, offset: int) -> list:
        scores = []
        for k in range(20):
            rng  = self.rng(offset + k)
            T, U = draw(rng)
            x    = CompoundChain((T, U)).sample(mc_size(1_000_000,
                   50_000), rng)
            m    = moments(T, U)
            scores += [se_distance(x, m.mean)[1],
                       se_distance(x, m.variance, "var")[1]]
        return scores

    @slow
    def test_unit_double_ig_by_simulation(self):
        T = U = IGParams(1.0, 1.0)
        x = CompoundChain((T, U)).sample(2_000_000, self.rng(2))
        self.assertWithinSE(x, 1.0, k=4)
        self.assertWithinSE(x, 2.0, k=4, what="var")

