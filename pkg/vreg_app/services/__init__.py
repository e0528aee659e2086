"""수치 계산 서비스."""
