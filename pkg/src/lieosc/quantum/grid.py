"""Uniform periodic grid and immutable wavefunction container."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import ParameterError


@dataclass(frozen=True)
class Grid:
    """N points x_j = x_min + j dx on [x_min, x_max), dx = (x_max - x_min)/N."""

    x_min: float
    x_max: float
    N: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ParameterError("grid needs x_max > x_min")
        if self.N < 2 or self.N & (self.N - 1):
            raise ParameterError("grid size N must be a power of two")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.N

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x_min + self.dx * np.arange(self.N)
        x.setflags(write=False)
        return x

    @cached_property
    def k(self) -> np.ndarray:
        k = 2.0 * np.pi * np.fft.fftfreq(self.N, self.dx)
        k.setflags(write=False)
        return k

    @property
    def k_max(self) -> float:
        return np.pi / self.dx

    def to_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "N": self.N}


@dataclass(frozen=True, eq=False)
class WaveState:
    """Complex amplitudes on a grid.

    ``normalizable`` is False for continuum states (plane waves, posmom
    eigenfunctions); ``unitary`` turns False once a non-unitary (complex
    parameter) operator has been applied.
    """

    grid: Grid
    psi: np.ndarray
    normalizable: bool = True
    unitary: bool = True

    def __post_init__(self):
        arr = np.array(self.psi, dtype=complex)
        if arr.shape != (self.grid.N,):
            raise ParameterError(f"amplitudes must have shape ({self.grid.N},)")
        arr.setflags(write=False)
        object.__setattr__(self, "psi", arr)

    def replace(self, psi, unitary: bool | None = None) -> "WaveState":
        return WaveState(self.grid, psi, self.normalizable,
                         self.unitary if unitary is None else (self.unitary and unitary))

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.grid.dx)

    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2

    def inner(self, other: "WaveState") -> complex:
        """<self|other> by grid quadrature."""
        return complex(np.vdot(self.psi, other.psi) * self.grid.dx)

    def normalized(self) -> "WaveState":
        return self.replace(self.psi / np.sqrt(self.norm()))


def l2_distance(a: WaveState, b: WaveState) -> float:
    if a.grid != b.grid:
        raise ParameterError("states live on different grids")
    return float(np.sqrt(np.sum(np.abs(a.psi - b.psi) ** 2) * a.grid.dx))
