"""도메인 예외 정의

검증 실패는 ValueError, 수치 실행 실패는 RuntimeError 계열로 둔다.
"""


class GridError(ValueError):
    """격자 크기 오류 (홀수/너무 작음/불일치)"""


class NonFiniteFieldError(ValueError):
    """NaN 또는 Inf가 포함된 입력 필드"""


class TrajectoryError(ValueError):
    """궤적 길이 또는 격자 불일치"""


class MissingAdjointError(ValueError):
    """FullNewton 증분 adjoint에 adjoint 궤적이 없음"""


class FieldFormatError(ValueError):
    """VRF1 / PGM 파일 포맷 오류"""


class UnknownProtocolError(ValueError):
    """등록되지 않은 진단 프로토콜 이름"""


class TransportBlowUpError(RuntimeError):
    """수송 해가 발산함 (max|m| > 1e3 * max|m0| 또는 non-finite)"""
