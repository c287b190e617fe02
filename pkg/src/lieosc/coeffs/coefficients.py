"""The six coefficients of H = a P^2/2 + b X^2/2 + c (XP+PX)/2 + d P + e X + f."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from ..errors import ParameterError
from .functions import Constant, TimeFunction, has_zero_on, time_function

NAMES = ("a", "b", "c", "d", "e", "f")


@dataclass(frozen=True)
class CoefficientSet:
    a: TimeFunction
    b: TimeFunction
    c: TimeFunction
    d: TimeFunction
    e: TimeFunction
    f: TimeFunction

    def __post_init__(self):
        for fld in fields(self):
            val = getattr(self, fld.name)
            if not isinstance(val, TimeFunction):
                object.__setattr__(self, fld.name, time_function(val))

    @classmethod
    def from_values(cls, a=0.0, b=0.0, c=0.0, d=0.0, e=0.0, f=0.0) -> "CoefficientSet":
        """Accepts numbers, expression strings, spec dicts or TimeFunctions."""
        return cls(*(time_function(v) for v in (a, b, c, d, e, f)))

    @classmethod
    def from_spec(cls, spec: dict) -> "CoefficientSet":
        unknown = set(spec) - set(NAMES)
        if unknown:
            raise ParameterError(f"unknown coefficient names {sorted(unknown)}")
        return cls.from_values(**{k: spec.get(k, 0.0) for k in NAMES})

    def to_spec(self) -> dict:
        return {k: getattr(self, k).to_spec() for k in NAMES}

    def values(self, t):
        """(a, b, c, d, e, f) evaluated at t."""
        return tuple(getattr(self, k)(t) for k in NAMES)

    def is_constant(self) -> bool:
        return all(getattr(self, k).is_constant() for k in NAMES)

    def require_nonzero_a(self, horizon: float) -> None:
        if has_zero_on(self.a, horizon):
            raise ParameterError("a(t) vanishes on the horizon; the Riccati transform divides by a")

    # Coefficients of the standard classical form  X'' + chi X' + xi X = eta.
    def chi(self, t):
        return -self.a.derivative()(t) / self.a(t)

    def xi(self, t):
        a, b, c = self.a(t), self.b(t), self.c(t)
        return a * b + self.a.derivative()(t) * c / a - c * c - self.c.derivative()(t)

    def eta(self, t):
        a, c, d, e = self.a(t), self.c(t), self.d(t), self.e(t)
        return c * d - a * e + self.d.derivative()(t) - self.a.derivative()(t) / a * d


def harmonic_oscillator() -> CoefficientSet:
    """H = (P^2 + X^2)/2."""
    return CoefficientSet(Constant(1.0), Constant(1.0), Constant(0.0),
                          Constant(0.0), Constant(0.0), Constant(0.0))


def sample(cs: CoefficientSet, ts) -> np.ndarray:
    return np.vstack([np.broadcast_to(v, np.shape(ts)) for v in cs.values(ts)])
