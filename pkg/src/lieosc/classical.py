"""Classical driven damped oscillator: steady response, closed-form motion,
numerical integration of general quadratic dynamics, and spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .coeffs import CoefficientSet
from .errors import IntegrationError, OverdampedError, ParameterError, UnboundedResonanceError

RTOL = 1e-9
ATOL = 1e-10


@dataclass(frozen=True)
class DDHOParams:
    """x'' + 2 gamma x' + omega0^2 x = F0 cos(Omega t + phi), x(0)=x0, x'(0)=p0."""

    omega0: float = 1.0
    gamma: float = 0.0
    F0: float = 0.0
    Omega: float = 1.0
    phi: float = 0.0
    x0: float = 0.0
    p0: float = 0.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ParameterError("omega0 must be positive")
        if self.gamma < 0:
            raise ParameterError("gamma must be non-negative")
        if self.Omega < 0:
            raise ParameterError("drive frequency must be non-negative")

    @property
    def quality(self) -> float:
        return math.inf if self.gamma == 0 else self.omega0 / (2.0 * self.gamma)

    @property
    def damped_frequency(self) -> float:
        if self.gamma >= self.omega0:
            raise OverdampedError("no oscillation frequency for gamma >= omega0")
        return math.sqrt(self.omega0 ** 2 - self.gamma ** 2)


@dataclass(frozen=True)
class SteadyResponse:
    """Steady amplitude A2, absolute phase phi2, quadratures X1, X2 and the lag phi2 - phi."""

    A2: float
    phi2: float
    X1: float
    X2: float
    lag: float


def steady_response(p: DDHOParams) -> SteadyResponse:
    """Amplitude, phase and quadratures of the particular solution
    x_I = A2 cos(Omega t + phi2) = X1 cos(Omega t) + X2 sin(Omega t)."""
    u = p.omega0 ** 2 - p.Omega ** 2
    v = 2.0 * p.gamma * p.Omega
    den = u * u + v * v
    if den == 0.0:
        raise UnboundedResonanceError("undamped drive at the natural frequency: unbounded resonance")
    A2 = p.F0 / math.sqrt(den)
    # -0.0 keeps the undamped, above-resonance case at -pi (continuous limit of gamma -> 0+)
    lag = math.atan2(-v if v != 0 else -0.0, u)
    fc, fs = p.F0 * math.cos(p.phi), p.F0 * math.sin(p.phi)
    X1 = (u * fc + v * fs) / den
    X2 = (v * fc - u * fs) / den
    return SteadyResponse(A2, p.phi + lag, X1, X2, lag)


def resonant_frequency(omega0: float, gamma: float) -> float:
    """Drive frequency of maximum steady amplitude."""
    if omega0 ** 2 <= 2.0 * gamma ** 2:
        raise OverdampedError("overdamped response, no interior maximum")
    return math.sqrt(omega0 ** 2 - 2.0 * gamma ** 2)


def _particular(p: DDHOParams, t):
    """Particular solution and its derivative, secular at undamped resonance."""
    if p.gamma == 0.0 and p.Omega == p.omega0:
        w = p.omega0
        amp = p.F0 / (2.0 * w)
        x = amp * t * np.sin(w * t + p.phi)
        v = amp * (np.sin(w * t + p.phi) + w * t * np.cos(w * t + p.phi))
        return x, v
    r = steady_response(p)
    W = p.Omega
    x = r.X1 * np.cos(W * t) + r.X2 * np.sin(W * t)
    v = W * (-r.X1 * np.sin(W * t) + r.X2 * np.cos(W * t))
    return x, v


def homogeneous_constants(p: DDHOParams) -> tuple[float, float]:
    """(A1, phi1) of x_H = A1 e^{-gamma t} cos(omega t + phi1) for underdamped motion."""
    w = p.damped_frequency
    xi, vi = _particular(p, 0.0)
    xh, vh = p.x0 - float(xi), p.p0 - float(vi)
    # x_H = C1 e^{-gt} cos wt + C2 e^{-gt} sin wt
    C1, C2 = np.linalg.solve([[1.0, 0.0], [-p.gamma, w]], [xh, vh])
    return float(math.hypot(C1, C2)), float(math.atan2(-C2, C1))


def ddho_solution(p: DDHOParams, t):
    """Position and velocity of the driven damped oscillator at times t.

    Handles the under-, critically and overdamped branches.
    """
    t = np.asarray(t, dtype=float)
    xi, vi = _particular(p, t)
    xi0, vi0 = _particular(p, 0.0)
    xh0, vh0 = p.x0 - float(xi0), p.p0 - float(vi0)
    g, w0 = p.gamma, p.omega0
    if g < w0:
        w = math.sqrt(w0 * w0 - g * g)
        C1, C2 = xh0, (vh0 + g * xh0) / w
        env = np.exp(-g * t)
        c, s = np.cos(w * t), np.sin(w * t)
        xh = env * (C1 * c + C2 * s)
        vh = env * ((C2 * w - g * C1) * c - (C1 * w + g * C2) * s)
    elif g == w0:
        C1, C2 = xh0, vh0 + g * xh0
        env = np.exp(-g * t)
        xh = env * (C1 + C2 * t)
        vh = env * (C2 - g * (C1 + C2 * t))
    else:
        root = math.sqrt(g * g - w0 * w0)
        r1, r2 = -g + root, -g - root
        C1, C2 = np.linalg.solve([[1.0, 1.0], [r1, r2]], [xh0, vh0])
        xh = C1 * np.exp(r1 * t) + C2 * np.exp(r2 * t)
        vh = C1 * r1 * np.exp(r1 * t) + C2 * r2 * np.exp(r2 * t)
    return xh + xi, vh + vi


@dataclass(frozen=True)
class ClassicalTrajectory:
    times: np.ndarray
    X_c: np.ndarray
    P_c: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        for arr in (self.times, self.X_c, self.P_c, self.s):
            arr.setflags(write=False)


def _h4_rhs(cs: CoefficientSet):
    def rhs(t, y):
        al, be = y[0], y[1]
        a, b, c, d, e, f = cs.values(t)
        dal = c * al - a * be + d
        dbe = b * al - c * be + e
        ds = 0.5 * b * al * al - 0.5 * a * be * be + e * al + f
        return [dal, dbe, ds]
    return rhs


def integrate_classical(cs: CoefficientSet, x0: float, p0: float, horizon: float,
                        step: float) -> ClassicalTrajectory:
    """Integrate the classical centre motion (alpha = X_c, beta = -P_c) and its action.

    Output is resampled on a uniform grid with spacing ``step``.
    """
    if horizon < 0:
        raise ParameterError("horizon must be non-negative")
    if step <= 0:
        raise ParameterError("step must be positive")
    cs.require_nonzero_a(max(horizon, 1e-12))
    n = int(math.floor(horizon / step + 1e-9)) + 1
    times = np.arange(n) * step
    if horizon == 0:
        z = np.zeros(1)
        return ClassicalTrajectory(times, np.array([x0], float), np.array([p0], float), z)
    sol = solve_ivp(_h4_rhs(cs), (0.0, times[-1]), [x0, -p0, 0.0], method="RK45",
                    t_eval=times, rtol=RTOL, atol=ATOL)
    if sol.status != 0:
        t_fail = float(sol.t[-1]) if sol.t.size else 0.0
        raise IntegrationError(f"classical integration failed: {sol.message}", t_fail)
    return ClassicalTrajectory(times, sol.y[0].copy(), -sol.y[1].copy(), sol.y[2].copy())


def standard_form_residual(cs: CoefficientSet, traj: ClassicalTrajectory) -> np.ndarray:
    """Residual of X'' + chi X' + xi X - eta along a trajectory.

    X' and X'' are rebuilt from the first-order flow, so this checks the
    equivalence of the two descriptions rather than the integrator alone.
    """
    t = traj.times
    al, be = traj.X_c, -traj.P_c
    a, b, c, d, e, _ = cs.values(t)
    da, dc, dd = cs.a.derivative()(t), cs.c.derivative()(t), cs.d.derivative()(t)
    dal = c * al - a * be + d
    dbe = b * al - c * be + e
    ddal = dc * al + c * dal - da * be - a * dbe + dd
    return ddal + cs.chi(t) * dal + cs.xi(t) * al - cs.eta(t)


def power_spectrum(series, dt):
    """One-sided Hann-windowed periodogram of a uniformly sampled series.

    ``dt`` is the sample spacing or the array of sample times.  Frequencies
    are angular (rad per unit time), i.e. in units of omega0 for scaled time.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ParameterError("series must be one-dimensional with at least two samples")
    if np.ndim(dt) > 0:
        ts = np.asarray(dt, dtype=float)
        if ts.shape != x.shape:
            raise ParameterError("times and series lengths differ")
        steps = np.diff(ts)
        if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * max(abs(steps.mean()), 1e-300):
            raise ParameterError("non-uniform sampling")
        h = float(steps.mean())
    else:
        h = float(dt)
        if h <= 0:
            raise ParameterError("sample spacing must be positive")
    x = x - x.mean()
    w = np.hanning(x.size) if x.size > 2 else np.ones(x.size)
    spec = np.fft.rfft(x * w)
    norm = np.sum(w * w)
    power = (np.abs(spec) ** 2) * h / norm
    if x.size > 1:
        power[1:] *= 2.0
        if x.size % 2 == 0:
            power[-1] /= 2.0
    freqs = 2.0 * np.pi * np.fft.rfftfreq(x.size, h)
    return freqs, power


def response_sweep(omega0: float, gamma: float, F0s, Omegas, phi: float = 0.0) -> np.ndarray:
    """Rows (Omega, F0, A2, phi2, X1, X2) over the grid F0s x Omegas."""
    rows = []
    for F0 in np.atleast_1d(F0s):
        for W in np.atleast_1d(Omegas):
            r = steady_response(DDHOParams(omega0, gamma, float(F0), float(W), phi))
            rows.append((float(W), float(F0), r.A2, r.phi2, r.X1, r.X2))
    return np.array(rows, dtype=float).reshape(-1, 6)
