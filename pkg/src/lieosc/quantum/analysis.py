"""Moments, inner products and number-state projections."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import TruncatedMomentsWarning
from .grid import WaveState
from .states import hermite_function


@dataclass(frozen=True)
class Moments:
    mean_x: float
    mean_p: float
    delta_x: float
    delta_p: float
    norm: float


def momentum_derivative(state: WaveState) -> np.ndarray:
    """P psi = -i d psi/dx by spectral differentiation."""
    return np.fft.ifft(state.grid.k * np.fft.fft(state.psi))


def moments(state: WaveState) -> Moments:
    """<X>, <P>, Delta X, Delta P and the grid norm.

    X moments use grid quadrature, P moments the discrete spectrum.
    """
    if not state.normalizable:
        warnings.warn("moments of a continuum state are taken over the grid window",
                      TruncatedMomentsWarning, stacklevel=2)
    g = state.grid
    rho = np.abs(state.psi) ** 2
    norm = float(rho.sum() * g.dx)
    if norm == 0:
        return Moments(0.0, 0.0, 0.0, 0.0, 0.0)
    x = g.x
    mx = float((rho * x).sum() * g.dx / norm)
    vx = float((rho * (x - mx) ** 2).sum() * g.dx / norm)
    spec = np.abs(np.fft.fft(state.psi)) ** 2
    k = g.k
    sp = spec.sum()
    mp = float((spec * k).sum() / sp)
    vp = float((spec * (k - mp) ** 2).sum() / sp)
    return Moments(mx, mp, math.sqrt(max(vx, 0.0)), math.sqrt(max(vp, 0.0)), norm)


def number_overlap(state: WaveState, m: int, omega: float = 1.0) -> complex:
    """<m|psi> against the oscillator eigenfunction of frequency omega."""
    ref = hermite_function(m, state.grid.x, omega)
    return complex(np.vdot(ref, state.psi) * state.grid.dx)


def number_populations(state: WaveState, m_max: int, omega: float = 1.0) -> np.ndarray:
    return np.array([abs(number_overlap(state, m, omega)) ** 2 for m in range(m_max + 1)])
