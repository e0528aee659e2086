"""Reduced-space objective, gradient, Hessian and the Krylov inner solver.

The Newton driver lives in `vreg_app.services.inverse.newton` (it depends on the precond package,
which in turn builds on the objective here).
"""

from vreg_app.services.inverse.krylov import KrylovResult, pcg
from vreg_app.services.inverse.objective import (
    GradientResult,
    HessianContext,
    ObjectiveValue,
    ReducedSpace,
    evaluate_gradient,
    evaluate_objective,
    hessian_matvec,
)

__all__ = [
    "GradientResult",
    "HessianContext",
    "KrylovResult",
    "ObjectiveValue",
    "ReducedSpace",
    "evaluate_gradient",
    "evaluate_objective",
    "hessian_matvec",
    "pcg",
]
