"""Time functions: small closed-form kinds, parsed expressions and piecewise
combinations, all with exact derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import EvaluationError, ParameterError
from .expression import Node, parse_tree


class TimeFunction:
    """A real function of time g(t) with a derivative that is again a TimeFunction.

    Calling with a scalar returns a float, calling with an array returns an
    array of the same shape.
    """

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def derivative(self) -> "TimeFunction":
        raise NotImplementedError

    def to_spec(self):
        """JSON-compatible description accepted by :func:`time_function`."""
        raise TypeError(f"{type(self).__name__} is not serializable")

    def is_constant(self) -> bool:
        return False

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = np.asarray(self._eval(arr), dtype=float)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        if arr.ndim == 0:
            return float(out)
        return out

    def __add__(self, other):
        return Sum((self, as_time_function(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Sum((self, Negation(as_time_function(other))))

    def __rsub__(self, other):
        return Sum((as_time_function(other), Negation(self)))

    def __mul__(self, other):
        return Product((self, as_time_function(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Quotient(self, as_time_function(other))

    def __rtruediv__(self, other):
        return Quotient(as_time_function(other), self)

    def __neg__(self):
        return Negation(self)


@dataclass(frozen=True, eq=True)
class Constant(TimeFunction):
    value: float

    def _eval(self, t):
        return np.full(t.shape, float(self.value))

    def derivative(self):
        return Constant(0.0)

    def is_constant(self):
        return True

    def to_spec(self):
        return float(self.value)


@dataclass(frozen=True)
class Exponential(TimeFunction):
    """amplitude * exp(rate * t)"""

    rate: float
    amplitude: float = 1.0

    def _eval(self, t):
        with np.errstate(over="ignore"):
            out = self.amplitude * np.exp(self.rate * t)
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"exponential overflow for rate {self.rate}")
        return out

    def derivative(self):
        return Exponential(self.rate, self.amplitude * self.rate)

    def is_constant(self):
        return self.rate == 0.0 or self.amplitude == 0.0

    def to_spec(self):
        return {"kind": "exponential", "rate": self.rate, "amplitude": self.amplitude}


@dataclass(frozen=True)
class Harmonic(TimeFunction):
    """amplitude * cos(frequency * t + phase)"""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def _eval(self, t):
        return self.amplitude * np.cos(self.frequency * t + self.phase)

    def derivative(self):
        return Harmonic(self.amplitude * self.frequency, self.frequency, self.phase + math.pi / 2)

    def is_constant(self):
        return self.frequency == 0.0 or self.amplitude == 0.0

    def to_spec(self):
        return {"kind": "harmonic", "amplitude": self.amplitude,
                "frequency": self.frequency, "phase": self.phase}


@dataclass(frozen=True)
class Modulated(TimeFunction):
    """amplitude * (1 + depth * sin(frequency * t))"""

    amplitude: float
    depth: float
    frequency: float

    def _eval(self, t):
        return self.amplitude * (1.0 + self.depth * np.sin(self.frequency * t))

    def derivative(self):
        return Harmonic(self.amplitude * self.depth * self.frequency, self.frequency, 0.0)

    def is_constant(self):
        return self.depth == 0.0 or self.frequency == 0.0 or self.amplitude == 0.0

    def to_spec(self):
        return {"kind": "modulated", "amplitude": self.amplitude,
                "depth": self.depth, "frequency": self.frequency}


@dataclass(frozen=True)
class Sum(TimeFunction):
    terms: tuple

    def _eval(self, t):
        out = np.zeros(t.shape)
        for g in self.terms:
            out = out + g(t)
        return out

    def derivative(self):
        return Sum(tuple(g.derivative() for g in self.terms))

    def is_constant(self):
        return all(g.is_constant() for g in self.terms)

    def to_spec(self):
        return {"kind": "sum", "terms": [g.to_spec() for g in self.terms]}


@dataclass(frozen=True)
class Product(TimeFunction):
    factors: tuple

    def _eval(self, t):
        out = np.ones(t.shape)
        for g in self.factors:
            out = out * g(t)
        return out

    def derivative(self):
        terms = []
        for i, g in enumerate(self.factors):
            rest = self.factors[:i] + (g.derivative(),) + self.factors[i + 1:]
            terms.append(Product(rest))
        return Sum(tuple(terms))

    def is_constant(self):
        return all(g.is_constant() for g in self.factors)

    def to_spec(self):
        return {"kind": "product", "factors": [g.to_spec() for g in self.factors]}


@dataclass(frozen=True)
class Negation(TimeFunction):
    arg: TimeFunction

    def _eval(self, t):
        return -self.arg(t)

    def derivative(self):
        return Negation(self.arg.derivative())

    def is_constant(self):
        return self.arg.is_constant()

    def to_spec(self):
        return {"kind": "negation", "arg": self.arg.to_spec()}


@dataclass(frozen=True)
class Quotient(TimeFunction):
    num: TimeFunction
    den: TimeFunction

    def _eval(self, t):
        d = self.den(t)
        if np.any(d == 0.0):
            raise EvaluationError("division by zero in quotient")
        return self.num(t) / d

    def derivative(self):
        u, v = self.num, self.den
        return Quotient(Sum((Product((u.derivative(), v)), Negation(Product((u, v.derivative()))))),
                        Product((v, v)))

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def to_spec(self):
        return {"kind": "quotient", "num": self.num.to_spec(), "den": self.den.to_spec()}


@dataclass(frozen=True)
class Expression(TimeFunction):
    """Function defined by a parsed arithmetic expression in ``t``."""

    source: str
    tree: Node

    @property
    def has_division(self) -> bool:
        return self.tree.has_division

    def _eval(self, t):
        return self.tree.eval(t)

    def derivative(self):
        d = self.tree.diff()
        return Expression(str(d), d)

    def is_constant(self):
        return self.tree.is_const()

    def to_spec(self):
        return self.source


@dataclass(frozen=True)
class Piecewise(TimeFunction):
    """Segments on left-closed intervals: piece i covers [breaks[i-1], breaks[i]).

    A breakpoint evaluates with the segment to its right.
    """

    breaks: tuple
    pieces: tuple

    def __post_init__(self):
        if len(self.pieces) != len(self.breaks) + 1:
            raise ParameterError("piecewise needs exactly one more piece than breakpoints")
        if any(b2 <= b1 for b1, b2 in zip(self.breaks, self.breaks[1:])):
            raise ParameterError("piecewise breakpoints must be strictly increasing")

    def _eval(self, t):
        idx = np.searchsorted(np.asarray(self.breaks, dtype=float), t, side="right")
        out = np.zeros(t.shape)
        for i, g in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = g(t[mask])
        return out

    def derivative(self):
        return Piecewise(self.breaks, tuple(g.derivative() for g in self.pieces))

    def is_constant(self):
        return all(g.is_constant() for g in self.pieces) and len(
            {float(g(0.0)) for g in self.pieces}) == 1

    def to_spec(self):
        return {"kind": "piecewise", "breaks": list(self.breaks),
                "pieces": [g.to_spec() for g in self.pieces]}


class Sampled(TimeFunction):
    """Wraps numerically obtained callables (value and optional derivative).

    Used for trajectories such as Ermakov-derived K's.  Not serializable.
    """

    def __init__(self, fn: Callable, dfn: Callable | None = None, label: str = "sampled"):
        self._fn = fn
        self._dfn = dfn
        self.label = label

    def _eval(self, t):
        return np.asarray(self._fn(t), dtype=float)

    def derivative(self):
        if self._dfn is None:
            raise NotImplementedError(f"{self.label} has no derivative attached")
        return Sampled(self._dfn, None, label=f"d({self.label})")

    def __repr__(self):
        return f"Sampled({self.label})"


def parse_expression(src: str) -> Expression:
    """Parse an arithmetic expression over ``t`` into a TimeFunction."""
    return Expression(src, parse_tree(src))


def as_time_function(value) -> TimeFunction:
    if isinstance(value, TimeFunction):
        return value
    if isinstance(value, (int, float, np.floating, np.integer)) and not isinstance(value, bool):
        return Constant(float(value))
    raise TypeError(f"cannot interpret {value!r} as a time function")


_KINDS = {
    "constant": lambda s: Constant(float(s["value"])),
    "exponential": lambda s: Exponential(float(s["rate"]), float(s.get("amplitude", 1.0))),
    "harmonic": lambda s: Harmonic(float(s["amplitude"]), float(s["frequency"]), float(s.get("phase", 0.0))),
    "modulated": lambda s: Modulated(float(s["amplitude"]), float(s["depth"]), float(s["frequency"])),
    "sum": lambda s: Sum(tuple(time_function(x) for x in s["terms"])),
    "product": lambda s: Product(tuple(time_function(x) for x in s["factors"])),
    "negation": lambda s: Negation(time_function(s["arg"])),
    "quotient": lambda s: Quotient(time_function(s["num"]), time_function(s["den"])),
    "piecewise": lambda s: Piecewise(tuple(float(b) for b in s["breaks"]),
                                     tuple(time_function(x) for x in s["pieces"])),
}


def time_function(spec) -> TimeFunction:
    """Build a TimeFunction from a number, an expression string or a kind dict."""
    if isinstance(spec, TimeFunction):
        return spec
    if isinstance(spec, str):
        return parse_expression(spec)
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind not in _KINDS:
            raise ParameterError(f"unknown time-function kind {kind!r}")
        try:
            return _KINDS[kind](spec)
        except KeyError as exc:
            raise ParameterError(f"time-function kind {kind!r} is missing field {exc}") from None
    return as_time_function(spec)


def sample_points(horizon: float, n: int = 2001) -> np.ndarray:
    return np.linspace(0.0, float(horizon), n)


def has_zero_on(g: TimeFunction, horizon: float, n: int = 4001) -> bool:
    """True if g vanishes or changes sign on a dense sampling of [0, horizon]."""
    v = g(sample_points(horizon, n))
    return bool(np.any(v == 0.0) or np.any(np.sign(v[1:]) != np.sign(v[:-1])))


def check_finite(fns: Sequence[TimeFunction], horizon: float) -> None:
    ts = sample_points(horizon, 513)
    for g in fns:
        if not np.all(np.isfinite(g(ts))):
            raise EvaluationError(f"{g!r} is not finite on [0, {horizon}]")
