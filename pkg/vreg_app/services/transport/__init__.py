"""Transport solvers for the state, adjoint and incremental equations."""

from vreg_app.services.transport.base import TransportSolver
from vreg_app.services.transport.characteristics import trace_characteristics
from vreg_app.services.transport.solver import (
    JacobianSummary,
    jacobian_det,
    make_transport,
    solve_adjoint,
    solve_inc_adjoint,
    solve_inc_state,
    solve_state,
    summarize_jacobian,
)
from vreg_app.services.transport.types import Characteristics, Direction, TimeGrid, resolve_time_grid

__all__ = [
    "Characteristics",
    "Direction",
    "JacobianSummary",
    "TimeGrid",
    "TransportSolver",
    "jacobian_det",
    "make_transport",
    "resolve_time_grid",
    "solve_adjoint",
    "solve_inc_adjoint",
    "solve_inc_state",
    "solve_state",
    "summarize_jacobian",
    "trace_characteristics",
]
