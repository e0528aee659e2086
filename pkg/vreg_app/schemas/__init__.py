"""Pydantic 스키마 (설정, 리포트, 종료 코드)."""
