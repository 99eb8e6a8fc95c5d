"""Exact approximation characteristics of weighted Wiener classes."""

from ._wiener import (
    DivergentSeries,
    GuardExceeded,
    InvalidArgument,
    RegimeMismatch,
    Weight,
    WienerError,
    ball_count,
    basis_width,
    enumerate_shell,
    greedy_residual,
    inverse_count,
    lr_norm,
    predict_sigma,
    run_cli,
    sigma_m,
    sp_norm,
)

__all__ = [
    "DivergentSeries",
    "GuardExceeded",
    "InvalidArgument",
    "RegimeMismatch",
    "Weight",
    "WienerError",
    "ball_count",
    "basis_width",
    "enumerate_shell",
    "greedy_residual",
    "inverse_count",
    "lr_norm",
    "predict_sigma",
    "run_cli",
    "sigma_m",
    "sp_norm",
]
