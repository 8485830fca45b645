"""Numerical submanifold geometry and Ricci curvature inequality checks."""

__version__ = "0.1.0"
