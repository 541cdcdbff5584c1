"""Maximum-likelihood fits of the generalized-beta family, empirical
CCDFs, the Kolmogorov-Smirnov statistic, and straight-line tail fits.

Estimation is by maximum likelihood with a multi-start derivative-free
simplex search: the five-parameter likelihood surface is multimodal, so
each start draws its shape/scale parameters log-uniformly from the boxes
below and the best final likelihood wins. The KS statistic is reported
as a goodness-of-fit diagnostic, not used as the objective.

Parameter boxes (log-uniform draws):

    alpha in [0.5, 8],  p in [0.2, 5],  q in [0.2, 5]
    beta2 in [0.05, 20] * median(samples)

For the bounded (modified) member the upper support bound is
parameterized as beta1 = max(samples) * (1 + exp(eta)) with eta starting
at log(0.05), i.e. beta1 = 1.05 * max, and a hard lower bound at the
sample maximum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln

from rvtails.distributions import Family, GBParams, gb2_ccdf, mgb_ccdf

__all__ = [
    "FitResult",
    "LinearTailFit",
    "empirical_ccdf",
    "fit_mle",
    "ks_statistic",
    "linear_tail_fit",
    "ALPHA_BOX",
    "P_BOX",
    "Q_BOX",
    "BETA2_MEDIAN_BOX",
]

ALPHA_BOX = (0.5, 8.0)
P_BOX = (0.2, 5.0)
Q_BOX = (0.2, 5.0)
BETA2_MEDIAN_BOX = (0.05, 20.0)
_BETA1_INIT_FACTOR = 1.05

_NM_OPTIONS = {"maxiter": 4000, "maxfev": 4000, "xatol": 1e-6, "fatol": 1e-8}


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters with goodness-of-fit diagnostics."""

    family: Family
    params: GBParams
    ks: float
    log_likelihood: float
    converged: bool
    n_samples: int


@dataclass(frozen=True)
class LinearTailFit:
    """OLS line through (log10 x, log10 CCDF) over the fitted tail range."""

    slope: float
    intercept: float
    xmin: float
    excluded_above: float
    n_points: int
    slope_stderr: float


def empirical_ccdf(samples) -> tuple[np.ndarray, np.ndarray]:
    """Rank-based empirical CCDF, one point per sample.

    Sorted ascending; the k-th of N values (1-based) gets
    CCDF = (N - k + 1)/N, i.e. the fraction of the sample at or above
    it, so the maximum carries 1/N and survives a log transform. Tied
    values share the lowest participating rank's CCDF.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("empirical_ccdf needs at least one sample")
    first = np.searchsorted(x, x, side="left")  # lowest rank among ties
    ccdf = (n - first) / n
    return x, ccdf


def ks_statistic(samples, model_ccdf) -> float:
    """sup_x |empirical CDF - model CDF| over the sample points.

    Both one-sided limits of the empirical step function are compared at
    each jump: D = max_i max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|).
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("ks_statistic needs at least one sample")
    f = 1.0 - np.clip(np.asarray(model_ccdf(x), dtype=float), 0.0, 1.0)
    i = np.arange(1, n + 1)
    return float(max(np.abs(i / n - f).max(), np.abs((i - 1) / n - f).max()))


def _gb2_nll(theta, ln_x, sum_ln_x, n):
    ln_a, ln_b2, ln_p, ln_q = theta
    a, p, q = np.exp(ln_a), np.exp(ln_p), np.exp(ln_q)
    ln_b = gammaln(p) + gammaln(q) - gammaln(p + q)
    with np.errstate(over="ignore"):
        t_log = np.logaddexp(0.0, a * (ln_x - ln_b2))
        ll = (
            n * (ln_a - ln_b2 - ln_b)
            + (a * p - 1.0) * (sum_ln_x - n * ln_b2)
            - (p + q) * t_log.sum()
        )
    return -ll if np.isfinite(ll) else 1e300


def _mgb_nll(theta, ln_x, sum_ln_x, n, ln_max):
    ln_a, ln_b2, ln_p, ln_q, eta = theta
    a, p, q = np.exp(ln_a), np.exp(ln_p), np.exp(ln_q)
    ln_b1 = ln_max + np.log1p(np.exp(min(eta, 700.0)))  # beta1 > max sample
    if ln_b2 >= ln_b1:  # bounded member needs beta2 < beta1
        return 1e300
    ln_b = gammaln(p) + gammaln(q) - gammaln(p + q)
    r = np.exp(a * (ln_b2 - ln_b1))
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        t_log = np.logaddexp(0.0, a * (ln_x - ln_b2))
        w_log1m = np.log(-np.expm1(a * (ln_x - ln_b1)))
        ll = (
            n
            * (
                ln_a
                + np.log(p + q)
                - ln_b2
                - ln_b
                - np.log(q + r * (p + q))
                + (p + 1.0) * np.logaddexp(0.0, a * (ln_b2 - ln_b1))
            )
            + (a * p - 1.0) * (sum_ln_x - n * ln_b2)
            + (q - 1.0) * w_log1m.sum()
            - (p + q + 1.0) * t_log.sum()
        )
    return -ll if np.isfinite(ll) else 1e300


def _draw_start(rng, ln_median, family):
    theta = [
        rng.uniform(np.log(ALPHA_BOX[0]), np.log(ALPHA_BOX[1])),
        ln_median + rng.uniform(np.log(BETA2_MEDIAN_BOX[0]), np.log(BETA2_MEDIAN_BOX[1])),
        rng.uniform(np.log(P_BOX[0]), np.log(P_BOX[1])),
        rng.uniform(np.log(Q_BOX[0]), np.log(Q_BOX[1])),
    ]
    if family is Family.MGB:
        theta.append(np.log(_BETA1_INIT_FACTOR - 1.0))
    return np.asarray(theta)


def fit_mle(samples, family: Family, starts: int = 8, seed: int = 0) -> FitResult:
    """Fit the chosen family to positive samples by maximum likelihood.

    Runs ``starts`` Nelder-Mead searches from seeded random draws out of
    the documented parameter boxes and keeps the best converged one (or
    the best overall with converged=False when every start fails the
    simplex tolerances). The reported KS statistic compares the fitted
    CCDF against the full input sample.
    """
    family = Family(family)
    if family is Family.GB:
        raise ValueError("only the modified-bounded and unbounded members are fit")
    x = np.asarray(samples, dtype=float)
    if x.size < 100:
        raise ValueError(f"need at least 100 samples to fit, got {x.size}")
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise ValueError("samples must be finite and strictly positive")
    if starts < 1:
        raise ValueError("starts must be >= 1")

    ln_x = np.log(x)
    sum_ln_x = float(ln_x.sum())
    n = x.size
    ln_median = float(np.log(np.median(x)))
    ln_max = float(np.log(x.max()))

    if family is Family.GB2:
        def objective(theta):
            return _gb2_nll(theta, ln_x, sum_ln_x, n)
    else:
        def objective(theta):
            return _mgb_nll(theta, ln_x, sum_ln_x, n, ln_max)

    rng = np.random.default_rng(seed)
    best = None
    best_converged = None
    for _ in range(starts):
        theta0 = _draw_start(rng, ln_median, family)
        res = minimize(objective, theta0, method="Nelder-Mead", options=_NM_OPTIONS)
        if not np.isfinite(res.fun):
            continue
        if best is None or res.fun < best.fun:
            best = res
        if res.success and (best_converged is None or res.fun < best_converged.fun):
            best_converged = res
    if best is None:
        raise RuntimeError("all optimization starts returned non-finite likelihood")

    chosen = best_converged if best_converged is not None else best
    theta = chosen.x
    if family is Family.GB2:
        params = GBParams(
            alpha=float(np.exp(theta[0])),
            beta1=np.inf,
            beta2=float(np.exp(theta[1])),
            p=float(np.exp(theta[2])),
            q=float(np.exp(theta[3])),
        )
        ccdf = lambda v: gb2_ccdf(v, params)  # noqa: E731
    else:
        beta1 = float(np.exp(ln_max) * (1.0 + np.exp(theta[4])))
        params = GBParams(
            alpha=float(np.exp(theta[0])),
            beta1=beta1,
            beta2=float(np.exp(theta[1])),
            p=float(np.exp(theta[2])),
            q=float(np.exp(theta[3])),
        )
        ccdf = lambda v: mgb_ccdf(v, params)  # noqa: E731

    return FitResult(
        family=family,
        params=params,
        ks=ks_statistic(x, ccdf),
        log_likelihood=float(-chosen.fun),
        converged=best_converged is not None,
        n_samples=n,
    )


def linear_tail_fit(
    ccdf_points: tuple[np.ndarray, np.ndarray],
    xmin: float,
    exclusion_fraction: float = 0.9,
) -> LinearTailFit:
    """OLS of log10(CCDF) on log10(value) over the tail.

    Fits points with value > xmin, excluding the extreme end
    (value > exclusion_fraction * max value) and any zero-CCDF points.
    """
    values, ccdf = ccdf_points
    values = np.asarray(values, dtype=float)
    ccdf = np.asarray(ccdf, dtype=float)
    if values.size == 0:
        raise ValueError("no CCDF points given")
    if not 0.0 < exclusion_fraction < 1.0:
        raise ValueError("exclusion_fraction must lie in (0, 1)")
    bound = exclusion_fraction * float(values.max())
    keep = (values > xmin) & (values <= bound) & (ccdf > 0.0)
    m = int(keep.sum())
    if m < 3:
        raise ValueError(
            f"tail fit needs >= 3 points with {xmin} < value <= {bound:.4g}, got {m}"
        )
    lx = np.log10(values[keep])
    ly = np.log10(ccdf[keep])
    dx = lx - lx.mean()
    sxx = float(np.sum(dx * dx))
    if sxx == 0.0:
        raise ValueError("tail points have no spread in log10(value)")
    slope = float(np.sum(dx * (ly - ly.mean())) / sxx)
    intercept = float(ly.mean() - slope * lx.mean())
    resid = ly - (intercept + slope * lx)
    dof = max(m - 2, 1)
    stderr = float(np.sqrt(np.sum(resid**2) / dof / sxx))
    return LinearTailFit(
        slope=slope,
        intercept=intercept,
        xmin=float(xmin),
        excluded_above=bound,
        n_points=m,
        slope_stderr=stderr,
    )
