"""Closed-form initial states sampled on a grid."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ParameterError, ResolutionError
from .grid import Grid, WaveState


def hermite_function(n: int, x, omega: float = 1.0) -> np.ndarray:
    """Normalized oscillator eigenfunction phi_n for H = (P^2 + omega^2 X^2)/2.

    Uses the three-term recurrence of the normalized functions, which stays
    finite for large n where the plain Hermite polynomial overflows.
    """
    if n < 0:
        raise ParameterError("n must be non-negative")
    y = math.sqrt(omega) * np.asarray(x, dtype=float)
    prev = np.zeros_like(y)
    cur = math.pi ** -0.25 * np.exp(-0.5 * y * y)
    for j in range(n):
        prev, cur = cur, math.sqrt(2.0 / (j + 1)) * y * cur - math.sqrt(j / (j + 1)) * prev
    return omega ** 0.25 * cur


def hermite(grid: Grid, n: int = 0, omega: float = 1.0, center: float = 0.0) -> WaveState:
    if n < 0 or omega <= 0:
        raise ParameterError("hermite needs n >= 0 and omega > 0")
    width = 6.0 * math.sqrt((n + 0.5) / omega)
    if grid.x_min > center - width or grid.x_max - grid.dx < center + width:
        raise ResolutionError(
            f"grid [{grid.x_min}, {grid.x_max}) does not contain 6 sigma of hermite({n})")
    if grid.dx > 0.5 / math.sqrt(omega * (2 * n + 1)):
        raise ResolutionError(f"grid spacing too coarse for hermite({n})")
    psi = hermite_function(n, grid.x - center, omega)
    return WaveState(grid, psi).normalized()


def well(grid: Grid, n: int = 1, L: float = 1.0, left: float = 0.0) -> WaveState:
    """sqrt(2/L) sin(n pi (x-left)/L) inside [left, left+L], zero outside."""
    if n < 1:
        raise ParameterError("well states start at n = 1")
    if L <= 0:
        raise ParameterError("well width must be positive")
    if grid.x_min > left + 1e-12 or grid.x_max < left + L - 1e-12:
        raise ResolutionError("grid does not cover the well")
    psi = well_function(n, grid.x, L, left)
    return WaveState(grid, psi).normalized()


def well_function(n: int, x, L: float = 1.0, left: float = 0.0) -> np.ndarray:
    y = (np.asarray(x, dtype=float) - left) / L
    inside = (y >= 0.0) & (y <= 1.0)
    return np.where(inside, math.sqrt(2.0 / L) * np.sin(n * math.pi * y), 0.0)


def plane(grid: Grid, K0: float) -> WaveState:
    """Momentum eigenfunction exp(i K0 x)/sqrt(2 pi); continuum normalized."""
    return WaveState(grid, np.exp(1j * K0 * grid.x) / math.sqrt(2.0 * math.pi), normalizable=False)


def posmom_function(x, xi: float, X0: float = 1.0) -> np.ndarray:
    """Eigenfunction of (XP+PX)/2 with eigenvalue xi on the positive half line."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    pos = x > 0
    r = x[pos] / X0
    out[pos] = r ** -0.5 * np.exp(1j * xi * np.log(r)) / math.sqrt(2.0 * math.pi)
    return out


def posmom(grid: Grid, xi: float, X0: float = 1.0) -> WaveState:
    """Sampled for x > 0 only; a grid point at x = 0 is moved half a cell right."""
    if X0 <= 0:
        raise ParameterError("X0 must be positive")
    x = np.array(grid.x)
    x[np.isclose(x, 0.0, atol=1e-12 * grid.dx)] = 0.5 * grid.dx
    return WaveState(grid, posmom_function(x, xi, X0), normalizable=False)


KINDS = {"hermite": hermite, "well": well, "plane": plane, "posmom": posmom}


def eigenstate(kind: str, grid: Grid, **params) -> WaveState:
    try:
        builder = KINDS[kind]
    except KeyError:
        raise ParameterError(f"unknown eigenstate kind {kind!r}") from None
    try:
        return builder(grid, **params)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for {kind}: {exc}") from None
