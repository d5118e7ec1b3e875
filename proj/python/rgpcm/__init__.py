"""Eigenvalue-constrained Gaussian mixture clustering (rGPCM family)."""

from ._core import (
    FitReport,
    ari,
    bic,
    builtin_specs,
    cholesky,
    count_free_params,
    eig_sym,
    fit,
    kmeans_init,
    random_init,
    sample_mvn,
    sample_mvt,
    schedule_bounds,
    simulate,
    standardize,
    static_bounds_from_data,
    sweep,
)

__all__ = [
    "FitReport",
    "ari",
    "bic",
    "builtin_specs",
    "cholesky",
    "count_free_params",
    "eig_sym",
    "fit",
    "kmeans_init",
    "random_init",
    "sample_mvn",
    "sample_mvt",
    "schedule_bounds",
    "simulate",
    "standardize",
    "static_bounds_from_data",
    "sweep",
]

__version__ = "0.1.0"
