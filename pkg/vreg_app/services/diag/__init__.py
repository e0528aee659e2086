"""Diagnostics protocols producing ErrorReport rows."""

from vreg_app.services.diag.adjoint_error import adjoint_error, relative_adjoint_error
from vreg_app.services.diag.checks import gradient_check, hessian_symmetry_check
from vreg_app.services.diag.convergence import reference_convergence, self_convergence
from vreg_app.services.diag.eig_study import eig_study
from vreg_app.services.diag.kkt_bench import KKTRightHandSide, kkt_benchmark
from vreg_app.services.diag.op_count import op_count_check
from vreg_app.services.diag.registry import PROTOCOLS, run_protocol

__all__ = [
    "KKTRightHandSide",
    "PROTOCOLS",
    "adjoint_error",
    "eig_study",
    "gradient_check",
    "hessian_symmetry_check",
    "kkt_benchmark",
    "op_count_check",
    "reference_convergence",
    "relative_adjoint_error",
    "run_protocol",
    "self_convergence",
]
