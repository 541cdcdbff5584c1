"""Distribution-family tests: quadrature normalization oracles,
finite-difference derivative oracles, closed forms, tail and endpoint
asymptotics, and sampler consistency."""

import numpy as np
import pytest
from scipy.integrate import quad

from rvtails.distributions import (
    Family,
    GBParams,
    endpoint_asymptote,
    gb2_cdf,
    gb2_ccdf,
    gb2_pdf,
    gb2_sample,
    gb_cdf,
    gb_ccdf,
    gb_pdf,
    mgb_cdf,
    mgb_ccdf,
    mgb_pdf,
    mgb_sample,
    tail_exponent,
)

BOUNDED = GBParams(alpha=2.0, beta1=300.0, beta2=10.0, p=1.0, q=1.5)
BOUNDED_2 = GBParams(alpha=1.3, beta1=80.0, beta2=4.0, p=2.5, q=0.8)
UNBOUNDED = GBParams(alpha=2.0, beta1=np.inf, beta2=10.0, p=1.0, q=1.5)


class TestParams:
    def test_positive_required(self):
        with pytest.raises(ValueError):
            GBParams(alpha=0.0, beta1=1.0, beta2=1.0, p=1.0, q=1.0)
        with pytest.raises(ValueError):
            GBParams(alpha=1.0, beta1=1.0, beta2=-1.0, p=1.0, q=1.0)

    def test_bounded_needs_beta2_below_beta1(self):
        bad = GBParams(alpha=1.0, beta1=5.0, beta2=7.0, p=1.0, q=2.0)
        with pytest.raises(ValueError):
            mgb_pdf(1.0, bad)


class TestPdfNormalization:
    @pytest.mark.parametrize("params", [BOUNDED, BOUNDED_2])
    def test_gb_integrates_to_one(self, params):
        val, _ = quad(lambda x: gb_pdf(x, params), 0.0, params.beta1, limit=300)
        assert val == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("params", [BOUNDED, BOUNDED_2])
    def test_mgb_integrates_to_one(self, params):
        val, _ = quad(lambda x: mgb_pdf(x, params), 0.0, params.beta1, limit=300)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_gb2_integrates_to_one(self):
        val, _ = quad(lambda x: gb2_pdf(x, UNBOUNDED), 0.0, np.inf, limit=500)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_gb2_integrates_to_one_singular_origin(self):
        # alpha*p < 1: integrable singularity at x = 0
        params = GBParams(alpha=0.8, beta1=np.inf, beta2=2.0, p=0.9, q=2.0)
        head, _ = quad(lambda x: gb2_pdf(x, params), 0.0, 1.0, limit=300)
        tail, _ = quad(lambda x: gb2_pdf(x, params), 1.0, np.inf, limit=500)
        assert head + tail == pytest.approx(1.0, abs=1e-8)


class TestEdgeValues:
    def test_vanishing_at_support_edges(self):
        # q > 1 kills the density at beta1; alpha*p > 1 kills it at 0
        assert gb_pdf(BOUNDED.beta1, BOUNDED) == 0.0
        assert mgb_pdf(BOUNDED.beta1, BOUNDED) == 0.0
        assert gb_pdf(0.0, BOUNDED) == 0.0
        assert mgb_pdf(0.0, BOUNDED) == 0.0

    def test_ccdf_endpoints(self):
        assert mgb_ccdf(0.0, BOUNDED) == 1.0
        assert mgb_ccdf(BOUNDED.beta1, BOUNDED) == 0.0
        assert mgb_cdf(0.0, BOUNDED) == 0.0
        assert mgb_cdf(BOUNDED.beta1, BOUNDED) == 1.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            gb_pdf(-1.0, BOUNDED)
        with pytest.raises(ValueError):
            mgb_ccdf(BOUNDED.beta1 * 1.01, BOUNDED)
        with pytest.raises(ValueError):
            gb2_pdf(0.0, UNBOUNDED)
        with pytest.raises(ValueError):
            gb2_ccdf(-2.0, UNBOUNDED)


class TestClosedForms:
    def test_gb2_pdf_reduces_to_squared_reciprocal(self):
        # alpha = p = q = beta2 = 1: pdf(x) = (1 + x)^-2
        params = GBParams(alpha=1.0, beta1=np.inf, beta2=1.0, p=1.0, q=1.0)
        x = np.array([0.1, 0.5, 1.0, 3.0, 10.0])
        assert np.allclose(gb2_pdf(x, params), (1.0 + x) ** -2, rtol=1e-12)

    def test_gb2_ccdf_reduces_to_lomax(self):
        params = GBParams(alpha=1.0, beta1=np.inf, beta2=4.0, p=1.0, q=1.0)
        x = np.array([0.5, 2.0, 4.0, 40.0])
        assert np.allclose(gb2_ccdf(x, params), 1.0 / (1.0 + x / 4.0), rtol=1e-12)

    def test_gb2_ccdf_half_at_scale_when_p_equals_q(self):
        params = GBParams(alpha=2.0, beta1=np.inf, beta2=7.0, p=1.7, q=1.7)
        assert gb2_ccdf(7.0, params) == pytest.approx(0.5, abs=1e-12)

    def test_gb2_ccdf_limits(self):
        assert gb2_ccdf(1e-12, UNBOUNDED) == pytest.approx(1.0, abs=1e-9)
        assert gb2_ccdf(1e12, UNBOUNDED) == pytest.approx(0.0, abs=1e-12)


class TestConsistencyIdentities:
    @pytest.mark.parametrize("params", [BOUNDED, BOUNDED_2])
    def test_cdf_plus_ccdf_is_one(self, params):
        x = np.linspace(1e-6 * params.beta1, params.beta1 * (1 - 1e-9), 300)
        assert np.max(np.abs(mgb_cdf(x, params) + mgb_ccdf(x, params) - 1.0)) < 1e-11
        assert np.max(np.abs(gb_cdf(x, params) + gb_ccdf(x, params) - 1.0)) < 1e-11

    def test_mgb_ccdf_matches_pdf_quadrature(self):
        for x0 in (30.0, 120.0, 250.0):
            tail, _ = quad(
                lambda x: mgb_pdf(x, BOUNDED), x0, BOUNDED.beta1, limit=300
            )
            assert mgb_ccdf(x0, BOUNDED) == pytest.approx(tail, abs=1e-8)

    @pytest.mark.parametrize("params", [BOUNDED, BOUNDED_2])
    def test_mgb_derivative_consistency(self, params):
        x = np.linspace(0.05, 0.95, 120) * params.beta1
        h = np.maximum(x, 1.0) * 6e-6
        deriv = -(mgb_ccdf(x + h, params) - mgb_ccdf(x - h, params)) / (2 * h)
        pdf = mgb_pdf(x, params)
        assert np.max(np.abs(deriv - pdf) / pdf) < 1e-6

    def test_gb2_derivative_consistency(self):
        x = np.geomspace(0.5, 5000.0, 120)
        h = x * 6e-6
        deriv = -(gb2_ccdf(x + h, UNBOUNDED) - gb2_ccdf(x - h, UNBOUNDED)) / (2 * h)
        pdf = gb2_pdf(x, UNBOUNDED)
        assert np.max(np.abs(deriv - pdf) / pdf) < 1e-6

    def test_ccdfs_monotone_decreasing_and_in_unit_interval(self):
        xb = np.linspace(1e-3, BOUNDED.beta1, 2000)
        vb = mgb_ccdf(xb, BOUNDED)
        assert np.all(np.diff(vb) <= 1e-15)
        assert np.all((vb >= 0.0) & (vb <= 1.0))
        xu = np.geomspace(1e-3, 1e6, 2000)
        vu = gb2_ccdf(xu, UNBOUNDED)
        assert np.all(np.diff(vu) <= 1e-15)
        assert np.all((vu >= 0.0) & (vu <= 1.0))


class TestTailExponent:
    def test_values(self):
        assert tail_exponent(UNBOUNDED, Family.GB2) == pytest.approx(3.0)
        assert tail_exponent(BOUNDED, Family.MGB) == pytest.approx(5.0)
        assert tail_exponent(BOUNDED, Family.GB) == pytest.approx(3.0)

    def test_modified_minus_plain_is_alpha(self):
        for params in (BOUNDED, BOUNDED_2, UNBOUNDED):
            diff = tail_exponent(params, Family.MGB) - tail_exponent(params, Family.GB2)
            assert diff == pytest.approx(params.alpha, rel=1e-15)

    def test_gb2_loglog_slope_matches(self):
        x0 = 1e4 * UNBOUNDED.beta2
        d = 1e-4
        slope = (
            np.log(gb2_ccdf(x0 * np.exp(d), UNBOUNDED))
            - np.log(gb2_ccdf(x0 * np.exp(-d), UNBOUNDED))
        ) / (2 * d)
        assert slope == pytest.approx(-tail_exponent(UNBOUNDED, Family.GB2), rel=0.01)

    def test_mgb_loglog_slope_in_power_stretch(self):
        # beta2 << x << beta1 runs at -alpha*(q+1)
        params = GBParams(alpha=1.0, beta1=1e6, beta2=1.0, p=1.5, q=0.75)
        x0 = 1e3
        d = 1e-4
        slope = (
            np.log(mgb_ccdf(x0 * np.exp(d), params))
            - np.log(mgb_ccdf(x0 * np.exp(-d), params))
        ) / (2 * d)
        assert slope == pytest.approx(-tail_exponent(params, Family.MGB), rel=0.02)


class TestEndpointAsymptote:
    def test_zero_at_endpoint(self):
        assert endpoint_asymptote(BOUNDED.beta1, BOUNDED, Family.GB) == 0.0
        assert endpoint_asymptote(BOUNDED.beta1, BOUNDED, Family.MGB) == 0.0

    def test_ratio_of_asymptotes(self):
        x = 0.99 * BOUNDED.beta1
        ratio = endpoint_asymptote(x, BOUNDED, Family.MGB) / endpoint_asymptote(
            x, BOUNDED, Family.GB
        )
        expected = (1.0 + BOUNDED.p / BOUNDED.q) * (
            BOUNDED.beta2 / BOUNDED.beta1
        ) ** BOUNDED.alpha
        assert ratio == pytest.approx(expected, rel=1e-12)

    def test_exact_ccdf_approaches_asymptote(self):
        # the leading endpoint behavior carries an O((beta2/beta1)^alpha)
        # relative correction, so the ratio plateaus near 1
        for c in (0.995, 0.999, 0.9999):
            x = c * BOUNDED.beta1
            ratio = mgb_ccdf(x, BOUNDED) / endpoint_asymptote(x, BOUNDED, Family.MGB)
            assert ratio == pytest.approx(1.0, abs=0.02)
        ratio_gb = gb_ccdf(0.999 * BOUNDED.beta1, BOUNDED) / endpoint_asymptote(
            0.999 * BOUNDED.beta1, BOUNDED, Family.GB
        )
        assert ratio_gb == pytest.approx(1.0, abs=1e-3)

    def test_endpoint_suppression_of_modified_member(self):
        # near beta1 the modified CCDF sits below the plain-GB one by
        # roughly (beta2/beta1)^alpha
        x = 0.999 * BOUNDED.beta1
        suppression = mgb_ccdf(x, BOUNDED) / gb_ccdf(x, BOUNDED)
        scale = (BOUNDED.beta2 / BOUNDED.beta1) ** BOUNDED.alpha
        assert scale / 10.0 < suppression < scale * 10.0

    def test_rejects_unbounded_family(self):
        with pytest.raises(ValueError):
            endpoint_asymptote(1.0, UNBOUNDED, Family.GB2)


def _ks_against_model(samples: np.ndarray, model_cdf) -> float:
    xs = np.sort(samples)
    n = xs.size
    f = model_cdf(xs)
    i = np.arange(1, n + 1)
    return max(np.abs(i / n - f).max(), np.abs((i - 1) / n - f).max())


class TestSampling:
    def test_gb2_sampler_matches_model(self):
        draws = gb2_sample(UNBOUNDED, 100_000, seed=7)
        ks = _ks_against_model(draws, lambda x: gb2_cdf(x, UNBOUNDED))
        assert ks < 0.01

    def test_gb2_sampler_deterministic(self):
        a = gb2_sample(UNBOUNDED, 1000, seed=42)
        b = gb2_sample(UNBOUNDED, 1000, seed=42)
        assert np.array_equal(a, b)
        c = gb2_sample(UNBOUNDED, 1000, seed=43)
        assert not np.array_equal(a, c)

    def test_gb2_sample_mean_matches_quadrature(self):
        params = GBParams(alpha=2.0, beta1=np.inf, beta2=1.0, p=2.0, q=3.0)
        mean_quad, _ = quad(lambda x: x * gb2_pdf(x, params), 0.0, np.inf, limit=500)
        draws = gb2_sample(params, 100_000, seed=11)
        assert np.mean(draws) == pytest.approx(mean_quad, rel=0.02)

    def test_mgb_sampler_matches_model(self):
        draws = mgb_sample(BOUNDED, 100_000, seed=123)
        assert np.all(draws <= BOUNDED.beta1)
        ks = _ks_against_model(draws, lambda x: mgb_cdf(x, BOUNDED))
        assert ks < 0.01

    def test_mgb_sampler_deterministic(self):
        a = mgb_sample(BOUNDED, 500, seed=9)
        b = mgb_sample(BOUNDED, 500, seed=9)
        assert np.array_equal(a, b)

    def test_count_validation(self):
        with pytest.raises(ValueError):
            gb2_sample(UNBOUNDED, 0, seed=1)
        with pytest.raises(ValueError):
            mgb_sample(BOUNDED, 0, seed=1)
