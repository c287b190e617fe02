"""Displaced number states: overlaps <m|D(z)|n> and survival probabilities."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError

M_CAP = 512


def laguerre(n: int, k: int, x: float) -> float:
    """Associated Laguerre L_n^(k)(x) by the upward three-term recurrence."""
    if n < 0 or k < 0:
        raise ParameterError("laguerre needs non-negative degree and order")
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return cur


def displaced_overlap(n: int, m: int, z: complex) -> complex:
    """<m| D(z) |n> with D(z) = exp(z a^+ - z* a)."""
    if n < 0 or m < 0:
        raise ParameterError("quantum numbers must be non-negative")
    z = complex(z)
    r2 = abs(z) ** 2
    if m >= n:
        lo, hi, base = n, m, z
    else:
        lo, hi, base = m, n, -z.conjugate()
    L = laguerre(lo, hi - lo, r2)
    if L == 0.0:
        return 0j
    if base == 0:
        return complex(math.exp(-0.5 * r2) * L) if hi == lo else 0j
    logmag = 0.5 * (math.lgamma(lo + 1) - math.lgamma(hi + 1)) + (hi - lo) * math.log(abs(base)) - 0.5 * r2
    return math.exp(logmag) * L * cmath.exp(1j * (hi - lo) * cmath.phase(base))


@dataclass(frozen=True)
class DisplacedNumberCoeffs:
    n: int
    z: complex
    amplitudes: np.ndarray

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.amplitudes)

    @property
    def phases(self) -> np.ndarray:
        return np.angle(self.amplitudes)

    @property
    def m_max(self) -> int:
        return self.amplitudes.size - 1

    def total(self) -> float:
        return float(np.sum(self.magnitudes ** 2))


def displaced_expansion(n: int, z: complex, tail: float = 1e-12, cap: int = M_CAP,
                        m_max: int | None = None) -> DisplacedNumberCoeffs:
    """Coefficients of D(z)|n> in the number basis.

    Without ``m_max`` the truncation is the smallest m >= n whose tail mass
    falls below ``tail``, capped at ``cap``.
    """
    amps = []
    acc = 0.0
    m = 0
    limit = cap if m_max is None else m_max
    while m <= limit:
        c = displaced_overlap(n, m, z)
        amps.append(c)
        acc += abs(c) ** 2
        if m_max is None and m >= n and m >= abs(z) ** 2 and 1.0 - acc < tail:
            break
        m += 1
    return DisplacedNumberCoeffs(n, complex(z), np.array(amps, dtype=complex))


def survival_probability(n: int, E_c: float) -> float:
    """|<n|D(z)|n>|^2 = e^{-E_c} L_n(E_c)^2 with E_c = |z|^2."""
    if E_c < 0:
        raise ParameterError("E_c must be non-negative")
    return math.exp(-E_c) * laguerre(n, 0, E_c) ** 2


def classical_energy(alpha: float, beta: float) -> float:
    """E_c = (alpha^2 + beta^2)/2, the displacement energy |z|^2 of the centre."""
    return 0.5 * (alpha * alpha + beta * beta)
