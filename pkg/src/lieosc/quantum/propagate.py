"""Split-step Fourier solver for i dPsi/dt = H(t) Psi with the full quadratic H(t).

This is the independent reference for the Lie reconstruction: it never uses
the parameter flows.  Each Strang step evaluates the coefficients at the
step midpoint and factors exp(-i H dt) as

    V/2 . C/2 . T . C/2 . V/2

with V = b X^2/2 + e X + f (diagonal in x), T = a k^2/2 + d k (diagonal in k)
and C the dilation generated by c (XP+PX)/2.  The dilation is applied
exactly as four alternating shears, each diagonal in x or k.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..coeffs import CoefficientSet
from ..errors import ParameterError, PhaseStepWarning
from .grid import WaveState

# fourth-order triple-jump weights
_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_W0 = 1.0 - 2.0 * _W1


@dataclass
class PropagationResult:
    times: np.ndarray
    states: list

    def __iter__(self):
        return iter(zip(self.times, self.states))

    @property
    def final(self) -> WaveState:
        return self.states[-1]


class _Stepper:
    def __init__(self, cs: CoefficientSet, grid):
        self.cs = cs
        self.x = np.asarray(grid.x)
        self.x2 = self.x * self.x
        self.k = np.asarray(grid.k)
        self.k2 = self.k * self.k
        self._v_key = self._t_key = None

    def _potential(self, b, e, f, h):
        key = (b, e, f, h)
        if key != self._v_key:
            self._v = np.exp(-1j * h * (0.5 * b * self.x2 + e * self.x + f))
            self._v_key = key
        return self._v

    def _kinetic(self, a, d, h):
        key = (a, d, h)
        if key != self._t_key:
            self._t = np.exp(-1j * h * (0.5 * a * self.k2 + d * self.k))
            self._t_key = key
        return self._t

    def _shear_x(self, psi, q):
        return psi * np.exp(-0.5j * q * self.x2) if q else psi

    def _shear_k(self, psi, r):
        if not r:
            return psi
        return np.fft.ifft(np.exp(-0.5j * r * self.k2) * np.fft.fft(psi))

    def dilation(self, psi, theta):
        """exp(-i theta (XP+PX)/2) psi via diag(l, 1/l) = U(p) L(q) U(r) L(s)."""
        if theta == 0:
            return psi
        lam = math.exp(theta)
        q = math.sqrt(abs(lam - 1.0))
        p = (lam - 1.0) / q
        r = (1.0 / lam - 1.0) / q
        s = -q * lam
        # L(b) is the chirp with q = -b, U(r) the free step with r; rightmost acts first
        psi = self._shear_x(psi, -s)
        psi = self._shear_k(psi, r)
        psi = self._shear_x(psi, -q)
        return self._shear_k(psi, p)

    def strang(self, psi, t, h):
        a, b, c, d, e, f = (float(v) for v in self.cs.values(t + 0.5 * h))
        half_v = self._potential(b, e, f, 0.5 * h)
        psi = psi * half_v
        psi = self.dilation(psi, 0.5 * c * h)
        psi = np.fft.ifft(self._kinetic(a, d, h) * np.fft.fft(psi))
        psi = self.dilation(psi, 0.5 * c * h)
        return psi * half_v

    def step(self, psi, t, h, order):
        if order == 2:
            return self.strang(psi, t, h)
        psi = self.strang(psi, t, _W1 * h)
        psi = self.strang(psi, t + _W1 * h, _W0 * h)
        return self.strang(psi, t + (_W1 + _W0) * h, _W1 * h)


def _check_phase(cs: CoefficientSet, grid, horizon, dt):
    ts = np.linspace(0.0, horizon, 257)
    a, b, c, d, e, _ = (np.abs(np.broadcast_to(v, ts.shape)) for v in cs.values(ts))
    X = max(abs(grid.x_min), abs(grid.x_max))
    K = grid.k_max
    pot = (0.5 * b.max() * X * X + e.max() * X) * dt / 2
    kin = (0.5 * a.max() * K * K + d.max() * K) * dt
    if max(pot, kin) > math.pi / 4:
        warnings.warn(f"phase per step {max(pot, kin):.3g} rad exceeds pi/4; reduce dt",
                      PhaseStepWarning, stacklevel=3)


def direct_propagate(cs: CoefficientSet, psi0: WaveState, horizon: float, dt: float,
                     t_out=None, order: int = 2) -> PropagationResult:
    """Propagate psi0 from t=0 to ``horizon`` with step ``dt``.

    ``t_out`` lists snapshot times (each must be a multiple of dt); by default
    only the initial and final states are kept.  ``order`` is 2 (Strang) or
    4 (triple-jump composition of Strang steps).
    """
    if order not in (2, 4):
        raise ParameterError("order must be 2 or 4")
    if dt <= 0 or horizon < 0:
        raise ParameterError("need dt > 0 and horizon >= 0")
    n_steps = int(round(horizon / dt))
    if abs(n_steps * dt - horizon) > 1e-9 * max(1.0, horizon):
        raise ParameterError("horizon must be an integer number of steps")
    t_out = np.array([0.0, horizon] if t_out is None else t_out, dtype=float)
    idx = np.rint(t_out / dt).astype(int)
    if np.any(np.abs(idx * dt - t_out) > 1e-9) or np.any(idx < 0) or np.any(idx > n_steps):
        raise ParameterError("snapshot times must be multiples of dt within the horizon")
    ts = np.linspace(0.0, horizon, 65)
    for v in cs.values(ts):
        if np.iscomplexobj(v):
            raise ParameterError("direct propagation needs real coefficients")
    if n_steps:
        _check_phase(cs, psi0.grid, horizon, dt)
    stepper = _Stepper(cs, psi0.grid)
    wanted = {}
    for j, i in enumerate(idx):
        wanted.setdefault(int(i), []).append(j)
    out = [None] * len(t_out)
    psi = np.array(psi0.psi)
    for j in wanted.get(0, []):
        out[j] = psi0
    for n in range(1, n_steps + 1):
        psi = stepper.step(psi, (n - 1) * dt, dt, order)
        if n in wanted:
            snap = psi0.replace(psi)
            for j in wanted[n]:
                out[j] = snap
    return PropagationResult(t_out, out)
