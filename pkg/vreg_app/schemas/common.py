"""공통 스키마 - 종료 코드, 솔버 상태"""

from enum import Enum, IntEnum


class ExitCode(IntEnum):
    """CLI 종료 코드"""

    OK = 0
    INVALID_INPUT = 1
    MAX_ITER = 2
    LINE_SEARCH_FAILED = 3


class SolverStatus(str, Enum):
    """Newton 종료 상태"""

    CONVERGED = "converged"
    MAX_ITER = "maxit"
    LINE_SEARCH_FAILED = "linesearch_failed"

    @property
    def exit_code(self) -> ExitCode:
        return {
            SolverStatus.CONVERGED: ExitCode.OK,
            SolverStatus.MAX_ITER: ExitCode.MAX_ITER,
            SolverStatus.LINE_SEARCH_FAILED: ExitCode.LINE_SEARCH_FAILED,
        }[self]


# 불안정 해 표기 (self-convergence 등)
UNSTABLE_SENTINEL = "***"
