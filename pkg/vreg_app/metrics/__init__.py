"""연산 카운터 (FFT / 보간)."""
