"""Lie-algebraic solutions of driven, damped and parametric quantum oscillators."""

__version__ = "0.1.0"
