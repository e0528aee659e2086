"""Periodic pseudospectral core."""

from vreg_app.services.spectral.grid import DIM, Grid
from vreg_app.services.spectral.operators import (
    Band,
    SpectralWeights,
    apply_div_penalty,
    apply_inv_reg,
    apply_reg,
    band_limited_random,
    cutoff_filter,
    divergence,
    gradient,
    inner,
    norm,
    project_div_free,
    prolong,
    resample,
    restrict,
    spectral_weights,
)

__all__ = [
    "DIM",
    "Band",
    "Grid",
    "SpectralWeights",
    "apply_div_penalty",
    "apply_inv_reg",
    "apply_reg",
    "band_limited_random",
    "cutoff_filter",
    "divergence",
    "gradient",
    "inner",
    "norm",
    "project_div_free",
    "prolong",
    "resample",
    "restrict",
    "spectral_weights",
]
