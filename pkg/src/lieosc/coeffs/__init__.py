"""Time-dependent coefficients of the scaled quadratic Hamiltonian."""

from .coefficients import NAMES, CoefficientSet, harmonic_oscillator
from .expression import parse_tree
from .functions import (Constant, Exponential, Expression, Harmonic, Modulated,
                        Negation, Piecewise, Product, Quotient, Sampled, Sum,
                        TimeFunction, as_time_function, parse_expression,
                        time_function)
from .presets import PRESETS, caldirola_kanai, free_well, parametric, posmom_test, preset

__all__ = [
    "NAMES", "CoefficientSet", "harmonic_oscillator", "parse_tree",
    "Constant", "Exponential", "Expression", "Harmonic", "Modulated", "Negation",
    "Piecewise", "Product", "Quotient", "Sampled", "Sum", "TimeFunction",
    "as_time_function", "parse_expression", "time_function",
    "PRESETS", "caldirola_kanai", "free_well", "parametric", "posmom_test", "preset",
]
