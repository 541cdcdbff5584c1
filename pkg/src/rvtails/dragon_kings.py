"""Order-statistics outlier testing and binomial confidence bands.

Each tail point x_(k) of an ordered sample of size N gets the p-value

    p = 1 - I(F(x_(k)); k, N - k + 1)

where F is the fitted CDF and I the regularized incomplete beta, i.e.
the CDF of the k-th uniform order statistic evaluated at F(x_(k)). Small
p means the point sits too HIGH for its rank under the model (Dragon
King); large p means it sits too LOW (negative Dragon King); the rest of
the tail is consistent with the model (Black Swan regime). Pointwise
confidence bands for the empirical CCDF come from quantile inversion of
Binomial(N, model CCDF).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from rvtails.distributions import Family, gb2_ccdf, mgb_ccdf
from rvtails.fitting import FitResult, LinearTailFit
from rvtails.special import binom_quantile, reg_inc_beta

__all__ = [
    "LABEL_DK",
    "LABEL_BS",
    "LABEL_NDK",
    "PointTest",
    "CIBand",
    "DKReport",
    "classify",
    "u_test",
    "ci_band",
    "dk_report",
    "model_functions",
]

LABEL_DK = "DK"
LABEL_BS = "BS"
LABEL_NDK = "nDK"


@dataclass(frozen=True)
class PointTest:
    """U-test outcome for one order statistic (1-based ascending rank)."""

    rank_k: int
    value: float
    model_cdf: float
    p_value: float
    label: str


@dataclass(frozen=True)
class CIBand:
    """Pointwise binomial band for the empirical CCDF at one x."""

    x: float
    model_ccdf: float
    lower: float
    upper: float
    confidence: float


@dataclass(frozen=True)
class DKReport:
    """Per-fit tail report: tested points plus confidence bands."""

    window_n: int
    model_tag: str
    points: list[PointTest] = field(default_factory=list)
    bands: list[CIBand] = field(default_factory=list)
    fit: Union[FitResult, LinearTailFit, None] = None

    def count(self, label: str) -> int:
        return sum(1 for pt in self.points if pt.label == label)


def classify(p: float, dk_threshold: float = 0.05, ndk_threshold: float = 0.95) -> str:
    """DK below dk_threshold, nDK above ndk_threshold, BS between."""
    if not dk_threshold < ndk_threshold:
        raise ValueError("dk_threshold must be < ndk_threshold")
    if p < dk_threshold:
        return LABEL_DK
    if p > ndk_threshold:
        return LABEL_NDK
    return LABEL_BS


def _order_statistic_pvalues(
    cdf_values: np.ndarray, ranks: np.ndarray, n_total: int
) -> np.ndarray:
    f = np.clip(cdf_values, 0.0, 1.0)
    k = np.asarray(ranks, dtype=float)
    return 1.0 - reg_inc_beta(f, k, n_total - k + 1.0)


def u_test(
    sorted_samples,
    model_cdf: Callable,
    dk_threshold: float = 0.05,
    ndk_threshold: float = 0.95,
) -> list[PointTest]:
    """Order-statistics p-value for every point of an ascending sample."""
    x = np.asarray(sorted_samples, dtype=float)
    if x.size == 0:
        raise ValueError("u_test needs at least one sample")
    if np.any(np.diff(x) < 0.0):
        raise ValueError("u_test requires samples sorted in ascending order")
    n = x.size
    f = np.clip(np.asarray(model_cdf(x), dtype=float), 0.0, 1.0)
    ranks = np.arange(1, n + 1)
    pvals = _order_statistic_pvalues(f, ranks, n)
    return [
        PointTest(
            rank_k=int(k),
            value=float(v),
            model_cdf=float(fi),
            p_value=float(p),
            label=classify(float(p), dk_threshold, ndk_threshold),
        )
        for k, v, fi, p in zip(ranks, x, f, pvals)
    ]


def ci_band(
    model_ccdf_at_x: float, n: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Quantile-inversion band for the empirical CCDF at one point.

    The number of exceedances is Binomial(n, s) under the model with
    s = model CCDF, so the band [Q((1-c)/2)/n, Q((1+c)/2)/n] covers the
    empirical CCDF with probability >= c.
    """
    s = float(model_ccdf_at_x)
    if not 0.0 <= s <= 1.0:
        raise ValueError("model_ccdf_at_x must lie in [0, 1]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    lower = binom_quantile((1.0 - confidence) / 2.0, n, s) / n
    upper = binom_quantile((1.0 + confidence) / 2.0, n, s) / n
    return lower, upper


def model_functions(fit: Union[FitResult, LinearTailFit]):
    """(cdf, ccdf) callables implied by a distribution fit or a tail line.

    A fitted straight line on log-log axes implies
    CCDF(x) = 10^(intercept + slope * log10 x), clamped into [0, 1]
    since the line exceeds probability bounds outside its fitting range.
    """
    if isinstance(fit, LinearTailFit):
        def ccdf(x):
            x = np.asarray(x, dtype=float)
            with np.errstate(divide="ignore", over="ignore"):
                out = 10.0 ** (fit.intercept + fit.slope * np.log10(x))
            return np.clip(out, 0.0, 1.0)

        return (lambda x: 1.0 - ccdf(x)), ccdf
    if isinstance(fit, FitResult):
        if fit.family is Family.GB2:
            ccdf = lambda x: gb2_ccdf(x, fit.params)  # noqa: E731
        elif fit.family is Family.MGB:
            def ccdf(x):
                x = np.asarray(x, dtype=float)
                # the fitted support bound can sit below later query
                # points only through rounding; clamp defensively
                return mgb_ccdf(np.minimum(x, fit.params.beta1), fit.params)
        else:
            raise ValueError(f"no model functions for family {fit.family}")
        return (lambda x: 1.0 - ccdf(x)), ccdf
    raise TypeError(f"unsupported fit type: {type(fit).__name__}")


def _tag_for(fit: Union[FitResult, LinearTailFit]) -> str:
    return "lf" if isinstance(fit, LinearTailFit) else fit.family.value


def dk_report(
    samples,
    fits: Sequence[Union[FitResult, LinearTailFit]],
    xmin: float = 40.0,
    dk_threshold: float = 0.05,
    ndk_threshold: float = 0.95,
    confidence: float = 0.95,
    window_n: int = 0,
) -> list[DKReport]:
    """One tail report per fit.

    Points with value > xmin are U-tested with ranks assigned over the
    full ordered sample (k out of N), and each tested x gets a binomial
    confidence band for the empirical CCDF under that fit.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    if np.any(x <= 0.0):
        raise ValueError("samples must be strictly positive")
    n = x.size
    tail_idx = np.nonzero(x > xmin)[0]
    tail_x = x[tail_idx]
    ranks = tail_idx + 1

    reports = []
    for fit in fits:
        cdf_fn, ccdf_fn = model_functions(fit)
        points: list[PointTest] = []
        bands: list[CIBand] = []
        if tail_x.size:
            f = np.clip(np.asarray(cdf_fn(tail_x), dtype=float), 0.0, 1.0)
            pvals = _order_statistic_pvalues(f, ranks, n)
            s = np.clip(np.asarray(ccdf_fn(tail_x), dtype=float), 0.0, 1.0)
            for k, v, fi, p, si in zip(ranks, tail_x, f, pvals, s):
                points.append(
                    PointTest(
                        rank_k=int(k),
                        value=float(v),
                        model_cdf=float(fi),
                        p_value=float(p),
                        label=classify(float(p), dk_threshold, ndk_threshold),
                    )
                )
                lo, hi = ci_band(float(si), n, confidence)
                bands.append(
                    CIBand(
                        x=float(v),
                        model_ccdf=float(si),
                        lower=lo,
                        upper=hi,
                        confidence=confidence,
                    )
                )
        reports.append(
            DKReport(
                window_n=window_n,
                model_tag=_tag_for(fit),
                points=points,
                bands=bands,
                fit=fit,
            )
        )
    return reports
