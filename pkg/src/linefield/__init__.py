"""Random triangles from random lines: two inclination models, Monte Carlo and closed forms."""

__version__ = "0.1.0"
