"""Generalized-beta family: bounded and unbounded heavy-tailed laws.

Three members are exposed, sharing one five-parameter record
(alpha, beta1, beta2, p, q), all parameters positive:

* GB   -- bounded support [0, beta1]; CCDF tail runs like x^(-alpha*q)
          for beta2 << x << beta1 before terminating at beta1.
* mGB  -- same support; a modified variant whose CCDF holds the steeper
          power law x^(-alpha*(q+1)) over the mid range and then drops
          to zero at beta1 faster than GB by the factor (beta2/beta1)^alpha.
* GB2  -- the beta1 -> infinity limit (generalized beta prime): the
          x^(-alpha*q) power-law tail extends forever. beta1 is ignored.

Densities and CCDFs are assembled in log space throughout: quantities
like (beta1/beta2)^alpha overflow for fitted parameter combinations if
formed naively. inverse-CDF samplers are deterministic given a seed
(numpy's PCG64 generator, in its default_rng configuration).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from rvtails.special import ln_beta, reg_inc_beta, reg_inc_beta_inv

__all__ = [
    "Family",
    "GBParams",
    "gb_pdf",
    "gb_cdf",
    "gb_ccdf",
    "mgb_pdf",
    "mgb_cdf",
    "mgb_ccdf",
    "gb2_pdf",
    "gb2_cdf",
    "gb2_ccdf",
    "tail_exponent",
    "endpoint_asymptote",
    "gb2_sample",
    "mgb_sample",
]


class Family(str, enum.Enum):
    """Distribution tag. GB2 ignores beta1 (unbounded support)."""

    GB = "gb"
    MGB = "mgb"
    GB2 = "gb2"


@dataclass(frozen=True)
class GBParams:
    """Shared parameter record: shapes alpha, p, q; scales beta1, beta2.

    beta1 is the upper support bound for the bounded members and may be
    +inf when only GB2 is evaluated. The bounded members additionally
    require beta2 < beta1 (the regime of interest is beta2 << beta1).
    """

    alpha: float
    beta1: float
    beta2: float
    p: float
    q: float

    def __post_init__(self):
        for name in ("alpha", "beta1", "beta2", "p", "q"):
            v = getattr(self, name)
            if not v > 0.0:
                raise ValueError(f"GBParams.{name} must be > 0, got {v}")


def _require_bounded(params: GBParams):
    if not np.isfinite(params.beta1):
        raise ValueError("bounded family needs a finite beta1")
    if not params.beta2 < params.beta1:
        raise ValueError("bounded family needs beta2 < beta1")


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, (arr.ndim == 0)


def _out(val, scalar):
    return float(val) if scalar else val


def _log1p_pow(log_ratio, alpha):
    """log(1 + exp(alpha*log_ratio)) without overflow."""
    return np.logaddexp(0.0, alpha * log_ratio)


def _log1m_pow(log_ratio, alpha):
    """log(1 - exp(alpha*log_ratio)) for log_ratio <= 0; -inf at 0."""
    with np.errstate(divide="ignore"):
        return np.log(-np.expm1(alpha * log_ratio))


# ---------------------------------------------------------------------------
# bounded members (support [0, beta1])
# ---------------------------------------------------------------------------

def _check_bounded_domain(x, params):
    if np.any(x < 0.0) or np.any(x > params.beta1):
        raise ValueError(
            f"x must lie in [0, beta1]=[0, {params.beta1}] for the bounded family"
        )


def _bounded_logs(x, params: GBParams):
    a, b1, b2 = params.alpha, params.beta1, params.beta2
    with np.errstate(divide="ignore"):
        ln_x = np.log(x)
    ln_xb2 = ln_x - np.log(b2)
    ln_xb1 = ln_x - np.log(b1)
    ln_b2b1 = np.log(b2) - np.log(b1)
    l1p_t = _log1p_pow(ln_xb2, a)       # log(1 + (x/b2)^a)
    l1m_w = _log1m_pow(ln_xb1, a)       # log(1 - (x/b1)^a)
    l1p_r = _log1p_pow(ln_b2b1, a)      # log(1 + (b2/b1)^a)
    return ln_xb2, ln_xb1, ln_b2b1, l1p_t, l1m_w, l1p_r


def gb_pdf(x, params: GBParams):
    """Density of the bounded five-parameter member on [0, beta1].

    pdf(x) = alpha * (1 + (b2/b1)^a)^p * (x/b2)^(a*p-1)
             * (1 + (x/b2)^a)^(-p-q) * (1 - (x/b1)^a)^(q-1)
             / (b2 * B(p, q))
    """
    _require_bounded(params)
    x, scalar = _as_array(x)
    _check_bounded_domain(x, params)
    a, b2, p, q = params.alpha, params.beta2, params.p, params.q
    _, ln_xb1, _, l1p_t, _, l1p_r = _bounded_logs(x, params)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_pdf = (
            np.log(a)
            - np.log(b2)
            - ln_beta(p, q)
            + p * l1p_r
            + xlogy(a * p - 1.0, x / b2)
            + xlogy(q - 1.0, -np.expm1(a * ln_xb1))
            - (p + q) * l1p_t
        )
        out = np.exp(log_pdf)
    return _out(out, scalar)


def mgb_pdf(x, params: GBParams):
    """Density of the modified bounded member on [0, beta1].

    pdf(x) = alpha * (p+q) * (1 + (b2/b1)^a)^(p+1) * (x/b2)^(a*p-1)
             * (1 + (x/b2)^a)^(-p-q-1) * (1 - (x/b1)^a)^(q-1)
             / (b2 * B(p, q) * (q + (b2/b1)^a * (p+q)))
    """
    _require_bounded(params)
    x, scalar = _as_array(x)
    _check_bounded_domain(x, params)
    a, b2, p, q = params.alpha, params.beta2, params.p, params.q
    _, ln_xb1, ln_b2b1, l1p_t, _, l1p_r = _bounded_logs(x, params)
    r = np.exp(a * ln_b2b1)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_pdf = (
            np.log(a)
            + np.log(p + q)
            - np.log(b2)
            - ln_beta(p, q)
            - np.log(q + r * (p + q))
            + (p + 1.0) * l1p_r
            + xlogy(a * p - 1.0, x / b2)
            + xlogy(q - 1.0, -np.expm1(a * ln_xb1))
            - (p + q + 1.0) * l1p_t
        )
        out = np.exp(log_pdf)
    return _out(out, scalar)


def _mgb_terms(x, params: GBParams):
    """(ln z, first-term argument pieces, log correction) for the mGB CDF/CCDF."""
    a, b2, p, q = params.alpha, params.beta2, params.p, params.q
    ln_xb2, ln_xb1, ln_b2b1, l1p_t, l1m_w, l1p_r = _bounded_logs(x, params)
    r = np.exp(a * ln_b2b1)
    ln_z = l1m_w - l1p_t                # z = (1 - (x/b1)^a) / (1 + (x/b2)^a)
    # g = (1 + (b2/b1)^a) * (x/b2)^a / (1 + (x/b2)^a)
    ln_g = l1p_r + a * ln_xb2 - l1p_t
    with np.errstate(invalid="ignore"):
        ln_corr = (
            -ln_beta(p, q)
            - np.log(q + r * (p + q))
            + q * ln_z
            + p * ln_g
        )
    return ln_z, ln_xb1, ln_xb2, l1p_t, ln_corr


def gb_cdf(x, params: GBParams):
    """CDF of the bounded member: I((w + t)/(1 + t); p, q) with
    w = (x/b1)^a, t = (x/b2)^a. Internal diagnostic target."""
    _require_bounded(params)
    x, scalar = _as_array(x)
    _check_bounded_domain(x, params)
    a, p, q = params.alpha, params.p, params.q
    _, ln_xb1, ln_xb2, l1p_t, _ = _mgb_terms(x, params)
    ln_v = np.logaddexp(a * ln_xb1, a * ln_xb2) - l1p_t
    v = np.minimum(np.exp(ln_v), 1.0)
    return _out(reg_inc_beta(v, p, q), scalar)


def gb_ccdf(x, params: GBParams):
    """CCDF of the bounded member: I((1-(x/b1)^a)/(1+(x/b2)^a); q, p)."""
    _require_bounded(params)
    x, scalar = _as_array(x)
    _check_bounded_domain(x, params)
    p, q = params.p, params.q
    ln_z = _mgb_terms(x, params)[0]
    z = np.minimum(np.exp(ln_z), 1.0)
    return _out(reg_inc_beta(z, q, p), scalar)


def mgb_cdf(x, params: GBParams):
    """CDF of the modified bounded member (bounded-member CDF plus a
    positive correction); clamped into [0, 1] against rounding."""
    _require_bounded(params)
    x, scalar = _as_array(x)
    _check_bounded_domain(x, params)
    a, p, q = params.alpha, params.p, params.q
    ln_z, ln_xb1, ln_xb2, l1p_t, ln_corr = _mgb_terms(x, params)
    ln_v = np.logaddexp(a * ln_xb1, a * ln_xb2) - l1p_t
    v = np.minimum(np.exp(ln_v), 1.0)
    out = reg_inc_beta(v, p, q) + np.exp(ln_corr)
    return _out(np.clip(out, 0.0, 1.0), scalar)


def mgb_ccdf(x, params: GBParams):
    """CCDF of the modified bounded member: I(z; q, p) minus the same
    correction term; strictly decreasing from 1 at x=0 to 0 at x=beta1."""
    _require_bounded(params)
    x, scalar = _as_array(x)
    _check_bounded_domain(x, params)
    p, q = params.p, params.q
    ln_z, _, _, _, ln_corr = _mgb_terms(x, params)
    z = np.minimum(np.exp(ln_z), 1.0)
    out = reg_inc_beta(z, q, p) - np.exp(ln_corr)
    return _out(np.clip(out, 0.0, 1.0), scalar)


# ---------------------------------------------------------------------------
# unbounded member (generalized beta prime), support (0, inf)
# ---------------------------------------------------------------------------

def _check_positive_domain(x):
    if np.any(x <= 0.0):
        raise ValueError("x must be > 0 for the unbounded family")


def gb2_pdf(x, params: GBParams):
    """Density of the unbounded member on (0, inf).

    pdf(x) = alpha * (x/b2)^(a*p-1) * (1 + (x/b2)^a)^(-p-q) / (b2 * B(p, q))
    """
    x, scalar = _as_array(x)
    _check_positive_domain(x)
    a, b2, p, q = params.alpha, params.beta2, params.p, params.q
    ln_xb2 = np.log(x) - np.log(b2)
    with np.errstate(over="ignore"):
        log_pdf = (
            np.log(a)
            - np.log(b2)
            - ln_beta(p, q)
            + (a * p - 1.0) * ln_xb2
            - (p + q) * _log1p_pow(ln_xb2, a)
        )
        out = np.exp(log_pdf)
    return _out(out, scalar)


def gb2_cdf(x, params: GBParams):
    """CDF of the unbounded member, 1 - gb2_ccdf computed stably as
    I(t/(1+t); p, q)."""
    x, scalar = _as_array(x)
    _check_positive_domain(x)
    a, b2, p, q = params.alpha, params.beta2, params.p, params.q
    ln_xb2 = np.log(x) - np.log(b2)
    y = np.exp(a * ln_xb2 - _log1p_pow(ln_xb2, a))
    return _out(reg_inc_beta(np.minimum(y, 1.0), p, q), scalar)


def gb2_ccdf(x, params: GBParams):
    """CCDF of the unbounded member: I(1/(1 + (x/b2)^a); q, p)."""
    x, scalar = _as_array(x)
    _check_positive_domain(x)
    a, b2, p, q = params.alpha, params.beta2, params.p, params.q
    ln_xb2 = np.log(x) - np.log(b2)
    y = np.exp(-_log1p_pow(ln_xb2, a))
    return _out(reg_inc_beta(np.minimum(y, 1.0), q, p), scalar)


# ---------------------------------------------------------------------------
# tail and endpoint behavior
# ---------------------------------------------------------------------------

def tail_exponent(params: GBParams, family: Family) -> float:
    """Magnitude of the CCDF log-log slope in the power-law stretch:
    alpha*q for GB/GB2 and alpha*(q+1) for the modified member."""
    family = Family(family)
    if family is Family.MGB:
        return params.alpha * (params.q + 1.0)
    return params.alpha * params.q


def endpoint_asymptote(x, params: GBParams, family: Family):
    """Approximate CCDF near the upper support bound beta1.

    With z = (1 - (x/b1)^a)/(1 + (x/b2)^a):

        GB:   z^q / (q * B(p, q))
        mGB:  (1 + p/q) * z^q * (b2/b1)^a / (q * B(p, q))

    Diagnostic only; valid for beta2 << beta1 and x near beta1. The
    modified member is suppressed by the extra (b2/b1)^a factor, which
    is how its CCDF dives below the GB one at the endpoint.
    """
    family = Family(family)
    if family is Family.GB2:
        raise ValueError("the unbounded family has no finite endpoint")
    _require_bounded(params)
    x, scalar = _as_array(x)
    _check_bounded_domain(x, params)
    a, p, q = params.alpha, params.p, params.q
    ln_z = _mgb_terms(x, params)[0]
    with np.errstate(invalid="ignore"):
        ln_out = q * ln_z - np.log(q) - ln_beta(p, q)
        if family is Family.MGB:
            ln_out = ln_out + np.log1p(p / q) + a * (
                np.log(params.beta2) - np.log(params.beta1)
            )
        out = np.exp(ln_out)
    return _out(out, scalar)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def gb2_sample(params: GBParams, count: int, seed: int) -> np.ndarray:
    """Inverse-transform draws from the unbounded member.

    u ~ Uniform(0,1); y = I^-1(u; q, p); x = beta2 * ((1-y)/y)^(1/alpha).
    Deterministic for a given seed (PCG64 default_rng).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    a, b2, p, q = params.alpha, params.beta2, params.p, params.q
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    u[u == 0.0] = 2.0**-53  # keep draws finite
    y = reg_inc_beta_inv(u, q, p)
    return b2 * np.exp((np.log1p(-y) - np.log(y)) / a)


def mgb_sample(
    params: GBParams, count: int, seed: int, tol: float = 1.0e-9
) -> np.ndarray:
    """Inverse-transform draws from the modified bounded member.

    Solves mgb_ccdf(x) = u on [0, beta1] by vectorized bisection (the
    CCDF is strictly decreasing). Residuals above tol raise rather
    than returning silently wrong draws.
    """
    _require_bounded(params)
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    u[u == 0.0] = 2.0**-53

    lo = np.zeros(count)
    hi = np.full(count, params.beta1)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        too_low = mgb_ccdf(mid, params) > u  # ccdf decreasing: root right of mid
        lo = np.where(too_low, mid, lo)
        hi = np.where(too_low, hi, mid)
    x = 0.5 * (lo + hi)
    resid = np.abs(mgb_ccdf(x, params) - u)
    if np.any(resid > tol):
        raise RuntimeError(
            f"mgb_sample inversion residual {float(resid.max()):.3e} exceeds {tol:.1e}"
        )
    return x
