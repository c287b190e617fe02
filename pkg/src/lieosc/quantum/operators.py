"""Grid actions of the single-generator exponentials and their composition.

Conventions (U^-1 (X, P) U for each U):
  free_step(r)  = exp(-i r P^2/2):        X -> X + r P
  dilate(th)    = exp(-i th (XP+PX)/2):   X -> e^th X,  P -> e^-th P,
                  i.e. psi(x) -> e^{-th/2} psi(e^{-th} x)
  chirp(q)      = exp(-i q X^2/2):         P -> P - q X
  kick(b)       = exp(-i b X):             P -> P - b
  shift(a)      = exp(-i a P):             X -> X + a, psi(x) -> psi(x - a)
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ResolutionError
from ..flows import H4State, Su2State
from .grid import WaveState

_BLOCK = 256


def _is_real(z) -> bool:
    return np.imag(z) == 0


def free_step(state: WaveState, r) -> WaveState:
    if r == 0:
        return state
    k = state.grid.k
    phase = np.exp(-0.5j * r * k * k)
    return state.replace(np.fft.ifft(phase * np.fft.fft(state.psi)), unitary=_is_real(r))


def chirp(state: WaveState, q) -> WaveState:
    if q == 0:
        return state
    x = state.grid.x
    return state.replace(state.psi * np.exp(-0.5j * q * x * x), unitary=_is_real(q))


def kick(state: WaveState, b) -> WaveState:
    if b == 0:
        return state
    return state.replace(state.psi * np.exp(-1j * b * state.grid.x), unitary=_is_real(b))


def shift(state: WaveState, a) -> WaveState:
    if a == 0:
        return state
    k = state.grid.k
    return state.replace(np.fft.ifft(np.exp(-1j * a * k) * np.fft.fft(state.psi)),
                         unitary=_is_real(a))


def global_phase(state: WaveState, s) -> WaveState:
    if s == 0:
        return state
    return state.replace(state.psi * np.exp(-1j * s), unitary=_is_real(s))


def trig_interpolate(state: WaveState, y) -> np.ndarray:
    """Band-limited (trigonometric) interpolant of the grid samples at points y.

    The Nyquist mode is split symmetrically so real data stays real.  Points
    outside the grid window evaluate to zero instead of wrapping around.
    """
    g = state.grid
    N = g.N
    coef = np.fft.fft(state.psi) / N
    k = np.array(g.k)
    nyq = N // 2
    coef = np.concatenate([coef, [0.5 * coef[nyq]]])
    coef[nyq] *= 0.5
    k = np.concatenate([k, [-k[nyq]]])
    y = np.asarray(y)
    out = np.zeros(y.shape, dtype=complex)
    inside = (np.real(y) >= g.x_min) & (np.real(y) <= g.x_max - g.dx * 1e-9)
    pts = y[inside] - g.x_min
    vals = np.empty(pts.shape, dtype=complex)
    for start in range(0, pts.size, _BLOCK):
        blk = pts[start:start + _BLOCK]
        vals[start:start + _BLOCK] = np.exp(1j * np.multiply.outer(blk, k)) @ coef
    out[inside] = vals
    return out


def _rms_width(psi, x, dx) -> float:
    w = np.abs(psi) ** 2
    tot = w.sum()
    if tot == 0:
        return 0.0
    m = (w * x).sum() / tot
    return float(math.sqrt(max((w * (x - m) ** 2).sum() / tot, 0.0)))


def dilate(state: WaveState, theta0, check: bool = True) -> WaveState:
    """psi(x) -> e^{-theta0/2} psi(e^{-theta0} x), by exact trigonometric resampling."""
    if theta0 == 0:
        return state
    g = state.grid
    scale = np.exp(-theta0)
    psi = np.exp(-0.5 * theta0) * trig_interpolate(state, scale * g.x)
    if check and _is_real(theta0):
        w_all = np.sum(np.abs(state.psi) ** 2)
        if w_all > 0:
            # samples of the input that land inside the output window
            inside = (g.x >= min(g.x_min * scale, g.x_max * scale)) & (
                g.x <= max(g.x_min * scale, g.x_max * scale))
            lost = 1.0 - np.sum(np.abs(state.psi[inside]) ** 2) / w_all
            if lost > 1e-8 and state.normalizable:
                raise ResolutionError(
                    f"dilation by e^{float(theta0):.3g} pushes {lost:.2e} of the state out of the grid")
            if state.normalizable and 2.0 * _rms_width(psi, g.x, g.dx) < 4.0 * g.dx:
                raise ResolutionError("dilation shrinks the state below 4 grid cells")
            spec = np.abs(np.fft.fft(psi)) ** 2
            high = np.abs(g.k) > 0.95 * g.k_max
            if state.normalizable and spec[high].sum() > 1e-8 * spec.sum():
                raise ResolutionError("dilated state is not resolved by the grid bandwidth")
    return state.replace(psi, unitary=_is_real(theta0))


def apply_lie(state: WaveState, h4: H4State, su2: Su2State, check: bool = True) -> WaveState:
    """U psi with U = e^{-is} e^{-i alpha P} e^{-i beta X} e^{-i theta_plus X^2/2}
    e^{-i theta0 (XP+PX)/2} e^{-i theta_minus P^2/2}; the rightmost factor acts first."""
    out = free_step(state, _clean(su2.theta_minus))
    out = dilate(out, _clean(su2.theta0), check=check)
    out = chirp(out, _clean(su2.theta_plus))
    out = kick(out, h4.beta)
    out = shift(out, h4.alpha)
    return global_phase(out, h4.s)


def apply_lie_inverse(state: WaveState, h4: H4State, su2: Su2State, check: bool = True) -> WaveState:
    out = global_phase(state, -h4.s)
    out = shift(out, -h4.alpha)
    out = kick(out, -h4.beta)
    out = chirp(out, -_clean(su2.theta_plus))
    out = dilate(out, -_clean(su2.theta0), check=check)
    return free_step(out, -_clean(su2.theta_minus))


def _clean(z):
    """Drop an exactly-zero imaginary part so real runs stay on the real branch."""
    z = complex(z)
    return z.real if z.imag == 0 else z


def symplectic_matrix(su2: Su2State) -> np.ndarray:
    """M with U2^-1 (X, P) U2 = M (X, P) for the su(2) factor of apply_lie."""
    tp, t0, tm = (complex(v) for v in (su2.theta_plus, su2.theta0, su2.theta_minus))
    e = np.exp(t0)
    return np.array([[e, tm * e], [-tp * e, 1.0 / e - tp * tm * e]])
