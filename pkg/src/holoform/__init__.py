"""Numerical toolkit for weighted analytic function spaces on the unit disc."""

__version__ = "0.1.0"
