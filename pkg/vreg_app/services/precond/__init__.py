"""KKT 전처리기 - REG (spectral split) / two-level (PCG(ε) | CHEB(k) coarse)"""

from vreg_app.services.precond.chebyshev import chebyshev_bound, chebyshev_solve
from vreg_app.services.precond.coarse import CoarseOperator
from vreg_app.services.precond.eigs import EigEstimate, estimate_eigs
from vreg_app.services.precond.lanczos import LanczosResult, lanczos, largest_eigenvalue, power_iteration
from vreg_app.services.precond.regularization import SplitKKTOperator, apply_reg_precond
from vreg_app.services.precond.two_level import TwoLevelPreconditioner, build_preconditioner

__all__ = [
    "CoarseOperator",
    "EigEstimate",
    "LanczosResult",
    "SplitKKTOperator",
    "TwoLevelPreconditioner",
    "apply_reg_precond",
    "build_preconditioner",
    "chebyshev_bound",
    "chebyshev_solve",
    "estimate_eigs",
    "lanczos",
    "largest_eigenvalue",
    "power_iteration",
]
