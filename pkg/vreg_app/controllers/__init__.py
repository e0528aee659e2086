"""CLI 진입점에서 사용하는 오케스트레이션 레이어."""
