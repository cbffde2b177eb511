"""Fixed-count implied-volatility inversion."""

from ._flashiv import (
    FlashIVError,
    GuessBranch,
    NormalizedQuote,
    SolverResult,
    black_price,
    build_dataset,
    dataset_names,
    dispatch_guess,
    erfcx_exact,
    erfcx_fast,
    implied_total_vol,
    iv_reference,
    li_coefficients,
    li_guess,
    log_black_price,
    norm_cdf,
    norm_cdf_inv,
    normalize,
    solve,
    solve_normalized,
    ulp_error,
)

__all__ = [
    "FlashIVError",
    "GuessBranch",
    "NormalizedQuote",
    "SolverResult",
    "black_price",
    "build_dataset",
    "dataset_names",
    "dispatch_guess",
    "erfcx_exact",
    "erfcx_fast",
    "implied_total_vol",
    "iv_reference",
    "li_coefficients",
    "li_guess",
    "log_black_price",
    "norm_cdf",
    "norm_cdf_inv",
    "normalize",
    "solve",
    "solve_normalized",
    "ulp_error",
]
