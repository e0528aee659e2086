"""파일 포맷 어댑터 (VRF1 필드, PGM 이미지, 리포트)."""

from vreg_app.adapters.field_io import decode_field, encode_field, read_field, write_field
from vreg_app.adapters.pgm_io import decode_pgm, encode_pgm, read_pgm, write_pgm
from vreg_app.adapters.report_writer import (
    read_json,
    write_convergence,
    write_csv,
    write_error_report,
    write_json,
)

__all__ = [
    "decode_field",
    "decode_pgm",
    "encode_field",
    "encode_pgm",
    "read_field",
    "read_json",
    "read_pgm",
    "write_convergence",
    "write_csv",
    "write_error_report",
    "write_field",
    "write_json",
    "write_pgm",
]
