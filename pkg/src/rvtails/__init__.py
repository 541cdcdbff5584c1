"""Realized-volatility tail analysis: distribution fits and Dragon King tests."""

from rvtails.special import (
    ln_beta,
    reg_inc_beta,
    reg_inc_beta_inv,
    binom_cdf,
    binom_quantile,
)

__version__ = "0.1.0"
