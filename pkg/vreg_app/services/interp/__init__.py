"""Periodic cubic B-spline interpolation."""

from vreg_app.services.interp.spline import (
    SplineCoefficients,
    evaluate,
    evaluate_gradient,
    evaluate_transpose,
    interpolate,
    interpolate_transpose,
    interpolate_vector,
    prefilter,
)

__all__ = [
    "SplineCoefficients",
    "evaluate",
    "evaluate_gradient",
    "evaluate_transpose",
    "interpolate",
    "interpolate_transpose",
    "interpolate_vector",
    "prefilter",
]
