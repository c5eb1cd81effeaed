"""Intertrade duration analysis toolkit.

Thin re-export of the compiled core; see the individual docstrings for the
estimator conventions (splitmix64 seeding, scale grids, q grids).
"""

from ._itd import (  # noqa: F401
    DataError,
    FluctuationCurve,
    MultifractalResult,
    NumericError,
    QExpFit,
    UsageError,
    WeibullFit,
    binomial_hq,
    binomial_tau,
    estimate_hurst,
    exponent_relations,
    fit_qexp,
    fit_weibull,
    gen_binomial_cascade,
    gen_fgn,
    gen_iid_exponential,
    gen_iid_gaussian,
    gen_iid_qexp,
    gen_iid_weibull,
    generalized_hurst,
    run_study,
    shuffled,
)

__all__ = [
    "DataError",
    "FluctuationCurve",
    "MultifractalResult",
    "NumericError",
    "QExpFit",
    "UsageError",
    "WeibullFit",
    "binomial_hq",
    "binomial_tau",
    "estimate_hurst",
    "exponent_relations",
    "fit_qexp",
    "fit_weibull",
    "gen_binomial_cascade",
    "gen_fgn",
    "gen_iid_exponential",
    "gen_iid_gaussian",
    "gen_iid_qexp",
    "gen_iid_weibull",
    "generalized_hurst",
    "run_study",
    "shuffled",
]

__version__ = "0.1.0"
