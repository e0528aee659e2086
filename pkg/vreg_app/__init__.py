"""vreg - 2D diffeomorphic image registration solver."""

__version__ = "0.1.0"
