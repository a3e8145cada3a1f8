import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sci_integrate
from scipy import special

from conjugate_channels.errors import DomainError, NonConvergent, NonFinite
from conjugate_channels.numerics import (
    DEFAULT_CONFIG,
    QUAD_CONFIG_ENV,
    Interval,
    QuadConfig,
    SeededSampler,
    Simplex,
    integrate_1d,
    integrate_2d,
    integrate_simplex,
    integrate_simplex_mc,
    integrate_triangle,
    log_beta_fn,
    log_binomial,
    log_gamma,
    simplex_sample,
)

UNIT = Interval(0.0, 1.0)


class TestInterval:
    def test_rejects_empty_and_nan(self):
        with pytest.raises(DomainError):
            Interval(1.0, 1.0)
        with pytest.raises(DomainError):
            Interval(float("nan"), 1.0)

    def test_truncation_of_infinite_ends(self):
        line = Interval(-math.inf, math.inf)
        assert not line.is_finite
        assert line.truncated(2.0, 0.5) == Interval(-4.0, 8.0)
        assert Interval(0.0, math.inf).truncated(0.0, 1.0, sigmas=3).hi == 3.0

    def test_intersect_hull_split(self):
        a, b = Interval(0, 2), Interval(1, 3)
        assert a.intersect(b) == Interval(1, 2)
        assert a.hull(b) == Interval(0, 3)
        assert Interval(0, 1).intersect(Interval(2, 3)) is None
        cells = Interval(0, 1).split(4)
        assert [c.lo for c in cells] == [0, 0.25, 0.5, 0.75]


class TestQuadConfig:
    def test_defaults(self):
        cfg = QuadConfig()
        assert (cfg.nodes_per_panel, cfg.max_panels, cfg.rel_tol) == (16, 2**14, 1e-10)
        assert cfg.gauss_truncation_sigmas == 12.0

    @pytest.mark.parametrize("bad", [dict(nodes_per_panel=1), dict(rel_tol=0.0), dict(max_panels=0),
                                     dict(initial_panels=10, max_panels=4), dict(mc_samples=0)])
    def test_invalid(self, bad):
        with pytest.raises(DomainError):
            QuadConfig(**bad)

    def test_from_env(self, tmp_path, monkeypatch):
        path = tmp_path / "q.json"
        path.write_text('{"rel_tol": 1e-8, "seed": 5}')
        monkeypatch.setenv(QUAD_CONFIG_ENV, str(path))
        cfg = QuadConfig.from_env()
        assert cfg.rel_tol == 1e-8 and cfg.seed == 5
        path.write_text('{"bogus": 1}')
        with pytest.raises(DomainError):
            QuadConfig.from_env()


class TestIntegrate1d:
    def test_constant(self):
        assert integrate_1d(lambda x: np.ones_like(x), UNIT) == pytest.approx(1.0, abs=1e-14)

    def test_linear(self):
        assert integrate_1d(lambda x: x, UNIT) == pytest.approx(0.5, abs=1e-14)

    def test_normal_on_truncated_line(self):
        dom = Interval(-math.inf, math.inf).truncated(0.0, 1.0)
        val = integrate_1d(lambda x: np.exp(-x * x / 2) / math.sqrt(2 * math.pi), dom)
        assert abs(val - 1.0) <= 1e-10

    def test_infinite_domain_rejected(self):
        with pytest.raises(DomainError):
            integrate_1d(lambda x: x, Interval(0.0, math.inf))

    def test_endpoint_singularities(self):
        # x^-1/2 (1-x)^-1/2 integrates to pi
        val = integrate_1d(lambda x: 1 / np.sqrt(x * (1 - x)), UNIT)
        assert val == pytest.approx(math.pi, rel=1e-9)

    def test_narrow_peak_found(self):
        s = 0.05
        val = integrate_1d(lambda x: np.exp(-x * x / (2 * s * s)) / (s * math.sqrt(2 * math.pi)), Interval(-24, 24))
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_nonfinite_raises(self):
        with pytest.raises(NonFinite):
            integrate_1d(lambda x: np.where(x > 0.5, np.nan, 1.0), UNIT)

    def test_panel_budget(self):
        cfg = DEFAULT_CONFIG.with_(max_panels=8, initial_panels=8)
        with pytest.raises(NonConvergent):
            integrate_1d(lambda x: np.sin(1 / (x + 1e-3)), UNIT, cfg)

    def test_matches_scipy_quad(self):
        f = lambda x: np.exp(np.sin(3 * x)) * x ** 2  # noqa: E731
        ref, _ = sci_integrate.quad(f, -1, 2, epsabs=1e-13)
        assert integrate_1d(f, Interval(-1, 2)) == pytest.approx(ref, rel=1e-11)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-3, 3), min_size=7, max_size=7),
           st.lists(st.floats(-3, 3), min_size=7, max_size=7),
           st.floats(-5, 5), st.floats(-5, 5))
    def test_linearity(self, cf, cg, a, b):
        f, g = np.polynomial.Polynomial(cf), np.polynomial.Polynomial(cg)
        dom = Interval(-1.0, 2.0)
        lhs = integrate_1d(lambda x: a * f(x) + b * g(x), dom)
        rhs = a * integrate_1d(f, dom) + b * integrate_1d(g, dom)
        scale = max(1.0, abs(lhs))
        assert abs(lhs - rhs) <= 2 * DEFAULT_CONFIG.abs_tol + 1e-12 * scale

    @pytest.mark.parametrize("alpha", [0.5, 1, 2, 3.5, 7])
    @pytest.mark.parametrize("beta", [0.5, 1, 2, 3.5, 7])
    def test_beta_integral_grid(self, alpha, beta):
        val = integrate_1d(lambda x: x ** (alpha - 1) * (1 - x) ** (beta - 1), UNIT)
        assert val == pytest.approx(math.exp(log_beta_fn(alpha, beta)), rel=1e-8)

    def test_deterministic(self):
        f = lambda x: np.cos(7 * x) ** 2  # noqa: E731
        assert integrate_1d(f, UNIT) == integrate_1d(f, UNIT)


class TestMultiDim:
    def test_2d_product(self):
        val = integrate_2d(lambda x, y: x * y, UNIT, UNIT)
        assert val == pytest.approx(0.25, abs=1e-13)

    def test_2d_gaussian(self):
        box = Interval(-12, 12)
        val = integrate_2d(lambda x, y: np.exp(-(x * x + y * y) / 2) / (2 * math.pi), box, box)
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_triangle(self):
        assert integrate_triangle(lambda p: np.ones(len(p))) == pytest.approx(0.5, abs=1e-12)
        # int over the triangle of x0 x1 = 1/24
        assert integrate_triangle(lambda p: p[:, 0] * p[:, 1]) == pytest.approx(1 / 24, abs=1e-12)

    def test_simplex_two_is_quadrature(self):
        val = integrate_simplex(lambda p: 6 * p[:, 0] * (1 - p[:, 0]), Simplex(2))
        assert val == pytest.approx(1.0, abs=1e-13)

    def test_simplex_mc(self):
        val = integrate_simplex(lambda p: 2 * np.ones(len(p)), Simplex(3))
        assert val == pytest.approx(1.0, abs=1e-12)
        # uniform density's first moment is 1/3
        m = integrate_simplex(lambda p: 2 * p[:, 0], Simplex(3))
        assert m == pytest.approx(1 / 3, abs=5e-3)

    def test_simplex_mc_seeded(self):
        f = lambda p: np.exp(p[:, 0])  # noqa: E731
        a = integrate_simplex_mc(f, Simplex(4), 1000, SeededSampler(3))
        b = integrate_simplex_mc(f, Simplex(4), 1000, SeededSampler(3))
        c = integrate_simplex_mc(f, Simplex(4), 1000, SeededSampler(4))
        assert a == b and a != c


class TestSpecialFunctions:
    def test_log_gamma_values(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(5.0) == pytest.approx(math.log(24), abs=1e-14)
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)

    def test_log_gamma_half_by_quadrature(self):
        # Gamma(1/2) = int_0^inf x^-1/2 e^-x dx; the tail beyond 60 is below 1e-26
        val = integrate_1d(lambda x: np.exp(-x) / np.sqrt(x), Interval(0.0, 60.0))
        assert math.log(val) == pytest.approx(log_gamma(0.5), abs=1e-10)

    @pytest.mark.parametrize("a", [0.0, -1.0, math.inf, math.nan])
    def test_log_gamma_domain(self, a):
        with pytest.raises(DomainError):
            log_gamma(a)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.5, 50.0))
    def test_recursion(self, a):
        assert abs(log_gamma(a + 1) - (math.log(a) + log_gamma(a))) <= 1e-11

    def test_factorial_recursion(self):
        for n in range(1, 20):
            assert log_gamma(n + 1) == pytest.approx(math.log(math.factorial(n)), rel=1e-14)

    def test_log_beta(self):
        assert log_beta_fn(1, 1) == 0.0
        assert log_beta_fn(2, 1) == pytest.approx(math.log(0.5), abs=1e-15)
        ref = integrate_1d(lambda x: x * (1 - x) ** 3, UNIT)
        assert log_beta_fn(2, 4) == pytest.approx(math.log(1 / 20), abs=1e-14)
        assert log_beta_fn(2, 4) == pytest.approx(math.log(ref), abs=1e-12)
        with pytest.raises(DomainError):
            log_beta_fn(0, 1)

    @pytest.mark.parametrize("a,b", [(0.3, 0.7), (12.5, 3.25), (200.0, 150.0)])
    def test_log_beta_vs_scipy(self, a, b):
        assert log_beta_fn(a, b) == pytest.approx(special.betaln(a, b), rel=1e-13)

    def test_log_binomial(self):
        np.testing.assert_allclose(np.exp(log_binomial(4, np.arange(5))), [1, 4, 6, 4, 1], rtol=1e-13)
        assert log_binomial(1000, 500) == pytest.approx(special.gammaln(1001) - 2 * special.gammaln(501), rel=1e-13)
        with pytest.raises(DomainError):
            log_binomial(4, 5)


class TestSimplexSample:
    def test_pairs_sum_to_one(self):
        pts = simplex_sample(2, 3, SeededSampler(7))
        assert pts.shape == (3, 2)
        np.testing.assert_allclose(pts.sum(axis=1), 1.0, atol=1e-15)
        assert np.all((pts > 0) & (pts < 1))

    def test_uniform_means(self):
        pts = simplex_sample(3, 10_000, SeededSampler(1))
        np.testing.assert_allclose(pts.mean(axis=0), 1 / 3, atol=0.02)

    def test_deterministic(self):
        np.testing.assert_array_equal(simplex_sample(2, 5, SeededSampler(7)), simplex_sample(2, 5, SeededSampler(7)))

    def test_split_streams_differ(self):
        s = SeededSampler(1)
        a = simplex_sample(3, 4, s.split(0))
        b = simplex_sample(3, 4, s.split(1))
        assert not np.allclose(a, b)

    def test_invalid(self):
        with pytest.raises(DomainError):
            simplex_sample(1, 3, SeededSampler(0))
        with pytest.raises(DomainError):
            simplex_sample(3, 0, SeededSampler(0))
