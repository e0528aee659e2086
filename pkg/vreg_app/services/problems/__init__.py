"""Registration problems: synthetic generators, preprocessing and file ingestion."""

from vreg_app.services.problems.ingest import load_image, load_problem
from vreg_app.services.problems.preprocess import gaussian_multiplier, gaussian_smooth, normalize_intensity, preprocess
from vreg_app.services.problems.synthetic import (
    PAIR_SCHEME,
    make_smooth_problem,
    make_synthetic_pair,
    smooth_image,
    smooth_velocity,
)
from vreg_app.services.problems.types import Preprocessing, Provenance, RegistrationProblem

__all__ = [
    "PAIR_SCHEME",
    "Preprocessing",
    "Provenance",
    "RegistrationProblem",
    "gaussian_multiplier",
    "gaussian_smooth",
    "load_image",
    "load_problem",
    "make_smooth_problem",
    "make_synthetic_pair",
    "normalize_intensity",
    "preprocess",
    "smooth_image",
    "smooth_velocity",
]
