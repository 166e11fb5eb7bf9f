"""Latent-process GLMs for time series (C++ core via pybind11)."""

from ._lpglm import (
    REPORT_SCHEMA_VERSION,
    ConfigError,
    ConvergenceError,
    DomainError,
    UnsupportedError,
    analyze,
    bessel_i,
    bessel_k,
    bootstrap,
    build_design,
    covariance,
    estimate_latent,
    evaluate,
    fit,
    log_bessel_i,
    log_bessel_k,
    predict,
    simulate_latent,
    simulate_series,
)

__all__ = [name for name in dir() if not name.startswith("_")]
