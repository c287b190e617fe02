"""Named coefficient sets for the standard model families."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from .coefficients import CoefficientSet
from .functions import (Constant, Exponential, Harmonic, Negation, Product,
                        Quotient, has_zero_on, sample_points, time_function)

DEFAULT_HORIZON = 100.0


def caldirola_kanai(gamma: float, f0: float = 0.0, Omega: float = 1.0, phi: float = 0.0) -> CoefficientSet:
    """Damped oscillator with mass factor exp(2 gamma t) and force f0 cos(Omega t + phi)."""
    if gamma < 0:
        raise ParameterError("caldirola-kanai requires gamma >= 0")
    up = Exponential(2.0 * gamma)
    down = Exponential(-2.0 * gamma)
    e = Negation(Product((up, Harmonic(f0, Omega, phi))))
    zero = Constant(0.0)
    return CoefficientSet(down, up, zero, zero, e, zero)


def parametric(M=1.0, omega0_sq=1.0, fc=0.0, horizon: float = DEFAULT_HORIZON) -> CoefficientSet:
    """Oscillator with time-dependent mass M(t), squared frequency and force term."""
    M, w2, fc = time_function(M), time_function(omega0_sq), time_function(fc)
    if has_zero_on(M, horizon):
        raise ParameterError(f"parametric mass M(t) vanishes on [0, {horizon}]")
    zero = Constant(0.0)
    a = Constant(1.0 / M(0.0)) if M.is_constant() else Quotient(Constant(1.0), M)
    return CoefficientSet(a, Product((M, w2)), zero, zero, fc, zero)


def free_well(L=1.0, force=0.0, horizon: float = DEFAULT_HORIZON) -> CoefficientSet:
    """Particle in a well of width L(t) pushed by ``force``.

    The X^2 coefficient is -L''/L, the auxiliary potential that makes the
    moving-wall solution exact; it vanishes for constant expansion speed.
    """
    L, force = time_function(L), time_function(force)
    if np.any(L(sample_points(horizon)) <= 0):
        raise ParameterError("well width L(t) must stay positive")
    zero = Constant(0.0)
    ddL = L.derivative().derivative()
    b = zero if ddL.is_constant() and ddL(0.0) == 0.0 else Negation(Quotient(ddL, L))
    return CoefficientSet(Constant(1.0), b, zero, zero, Negation(force), zero)


def posmom_test(gamma: float, f0: float = 0.0, Omega: float = 1.0) -> CoefficientSet:
    """Caldirola-Kanai coefficients used with the posmom target frame."""
    return caldirola_kanai(gamma, f0, Omega, 0.0)


PRESETS = {
    "caldirola-kanai": caldirola_kanai,
    "parametric": parametric,
    "free-well": free_well,
    "posmom-test": posmom_test,
}


def preset(tag: str, **params) -> CoefficientSet:
    try:
        builder = PRESETS[tag]
    except KeyError:
        raise ParameterError(f"unknown preset {tag!r}; choose from {sorted(PRESETS)}") from None
    try:
        return builder(**params)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for preset {tag!r}: {exc}") from None
