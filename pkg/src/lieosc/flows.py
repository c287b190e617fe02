"""Parameter flows of the Lie transformation.

* h4 flow: centre (alpha, beta) and phase s of the displacement factor.
* su2 flow: (theta_plus, theta0, theta_minus) of the chirp, dilation and
  spreading factors, with an arbitrary target frame (K1, K2, K3).
* K flow, whose solutions make the target-frame Hamiltonian an invariant.
* Riccati linearisation, Ermakov auxiliary equations and the closed forms of
  the damped (Caldirola-Kanai) case.

All integrations use scipy's RK45 with rtol 1e-9 / atol 1e-10 and dense output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .coeffs import CoefficientSet, Constant, Sampled, TimeFunction, time_function
from .errors import DivergenceError, IntegrationError, ParameterError

RTOL = 1e-9
ATOL = 1e-10
THETA_PLUS_BOUND = 1e6
THETA0_BOUND = 50.0


@dataclass(frozen=True)
class H4State:
    alpha: float = 0.0
    beta: float = 0.0
    s: float = 0.0


@dataclass(frozen=True)
class Su2State:
    theta_plus: complex = 0.0
    theta0: complex = 0.0
    theta_minus: complex = 0.0

    def is_real(self, tol: float = 1e-12) -> bool:
        return all(abs(np.imag(v)) <= tol for v in (self.theta_plus, self.theta0, self.theta_minus))


@dataclass(frozen=True)
class DivergenceEvent:
    time: float
    parameter: str
    kind: str

    def to_dict(self) -> dict:
        return {"time": self.time, "parameter": self.parameter, "kind": self.kind}


@dataclass(frozen=True)
class KSet:
    """Target-frame coefficients: H_K = K1 P^2/2 + K2 X^2/2 + K3 (XP+PX)/2."""

    K1: TimeFunction
    K2: TimeFunction
    K3: TimeFunction

    def __post_init__(self):
        for name in ("K1", "K2", "K3"):
            object.__setattr__(self, name, time_function(getattr(self, name)))

    @classmethod
    def zero(cls) -> "KSet":
        return cls(Constant(0.0), Constant(0.0), Constant(0.0))

    @classmethod
    def constant(cls, K1: float, K2: float, K3: float = 0.0) -> "KSet":
        return cls(Constant(K1), Constant(K2), Constant(K3))

    def values(self, t):
        return self.K1(t), self.K2(t), self.K3(t)

    def is_zero(self) -> bool:
        return all(k.is_constant() and k(0.0) == 0.0 for k in (self.K1, self.K2, self.K3))

    def is_constant(self) -> bool:
        return all(k.is_constant() for k in (self.K1, self.K2, self.K3))


class _Dense:
    """Uniform samples plus a dense interpolant from solve_ivp."""

    def __init__(self, t, sol, t_end):
        self.t = np.asarray(t, dtype=float)
        self._sol = sol
        self.t_end = float(t_end)

    def _dense(self, t):
        t = np.asarray(t, dtype=float)
        if self._sol is None:
            raise ValueError("trajectory has no dense interpolant")
        if np.any(t > self.t_end + 1e-12) or np.any(t < -1e-12):
            raise ValueError(f"time outside the integrated range [0, {self.t_end}]")
        return self._sol(np.clip(t, 0.0, self.t_end))


class H4Trajectory(_Dense):
    def __init__(self, t, y, sol, t_end):
        super().__init__(t, sol, t_end)
        self.alpha, self.beta, self.s, self.s_lagrangian = (np.array(v) for v in y)

    def at(self, t) -> H4State:
        y = self._dense(t)
        return H4State(float(y[0]), float(y[1]), float(y[2]))


class Su2Trajectory(_Dense):
    def __init__(self, t, tp, t0, tm, sol, t_end, events=(), unpack=None):
        super().__init__(t, sol, t_end)
        self.theta_plus = np.asarray(tp, dtype=complex)
        self.theta0 = np.asarray(t0, dtype=complex)
        self.theta_minus = np.asarray(tm, dtype=complex)
        self.events = list(events)
        self._unpack = unpack

    @property
    def diverged(self) -> bool:
        return bool(self.events)

    @property
    def first_divergence(self) -> float | None:
        return self.events[0].time if self.events else None

    def at(self, t) -> Su2State:
        y = self._dense(t)
        tp, t0, tm = self._unpack(y)
        return Su2State(complex(tp), complex(t0), complex(tm))


class KTrajectory(_Dense):
    def __init__(self, t, y, sol, t_end, cs: CoefficientSet, offset: int = 0):
        super().__init__(t, sol, t_end)
        self.K1, self.K2, self.K3 = (np.array(v) for v in y)
        self._cs = cs
        self._offset = offset

    def _k(self, t, i):
        return np.asarray(self._dense(t))[self._offset + i]

    def as_kset(self) -> KSet:
        """Continuous K's with derivatives from the K flow itself."""
        cs = self._cs

        def rate(i):
            def d(t):
                k1, k2, k3 = (self._k(t, j) for j in range(3))
                a, b, c = cs.a(t), cs.b(t), cs.c(t)
                return (2 * c * k1 - 2 * a * k3, 2 * b * k3 - 2 * c * k2, b * k1 - a * k2)[i]
            return d

        return KSet(*(Sampled(lambda t, i=i: self._k(t, i), rate(i), label=f"K{i + 1}") for i in range(3)))


@dataclass
class AuxiliarySolution:
    """Samples of an auxiliary function (riccati-u, ermakov-rho or ck-sigma)."""

    kind: str
    t: np.ndarray
    value: np.ndarray
    derivative: np.ndarray
    constants: dict = field(default_factory=dict)
    events: list = field(default_factory=list)
    _sol: object = None
    t_end: float = 0.0

    def __call__(self, t):
        """(value, derivative) at arbitrary t inside the integrated range."""
        if self._sol is None:
            raise ValueError("no dense interpolant attached")
        y = self._sol(np.clip(np.asarray(t, dtype=float), 0.0, self.t_end))
        return y[0], y[1]

    def state(self, t):
        return self._sol(np.clip(np.asarray(t, dtype=float), 0.0, self.t_end))


def _time_samples(horizon, t_eval, n_default=1001):
    if horizon < 0:
        raise ParameterError("horizon must be non-negative")
    if t_eval is None:
        return np.linspace(0.0, horizon, n_default) if horizon > 0 else np.zeros(1)
    t_eval = np.asarray(t_eval, dtype=float)
    if np.any(np.diff(t_eval) <= 0) or t_eval[0] < 0 or t_eval[-1] > horizon + 1e-12:
        raise ParameterError("t_eval must increase within [0, horizon]")
    return t_eval


def _integrate(rhs, y0, horizon, t_eval, events=(), what="flow"):
    """Run solve_ivp; returns (sol, samples, fired events, t_end).

    Terminal events truncate the samples at the event time.
    """
    y0 = np.asarray(y0, dtype=float)
    if horizon == 0:
        return None, y0[:, None].copy(), [], 0.0
    sol = solve_ivp(rhs, (0.0, float(horizon)), y0, method="RK45", rtol=RTOL, atol=ATOL,
                    dense_output=True, events=list(events) or None)
    fired = []
    if sol.status == -1:
        t_fail = float(sol.t[-1])
        if not np.all(np.isfinite(sol.y[:, -1])) or t_fail <= 0:
            raise IntegrationError(f"{what} integration failed: {sol.message}", t_fail)
        fired.append((t_fail, "integration-failure"))
    elif sol.status == 1:
        for i, te in enumerate(sol.t_events):
            if te.size:
                fired.append((float(te[0]), i))
    t_end = float(sol.t[-1])
    keep = t_eval[t_eval <= t_end + 1e-15]
    samples = sol.sol(keep) if keep.size else np.empty((y0.size, 0))
    return sol.sol, samples, fired, t_end


def _terminal(fn):
    fn.terminal = True
    return fn


def _h4_rates(cs, y, t):
    al, be = y[0], y[1]
    a, b, c, d, e, f = cs.values(t)
    dal = c * al - a * be + d
    dbe = b * al - c * be + e
    ds = 0.5 * a * be * be + 0.5 * b * al * al - c * al * be - d * be + e * al + f + dal * be
    ds_lag = 0.5 * b * al * al - 0.5 * a * be * be + e * al + f
    return dal, dbe, ds, ds_lag


def evolve_h4(cs: CoefficientSet, init: H4State = H4State(), horizon: float = 10.0,
              t_eval=None) -> H4Trajectory:
    """Integrate the displacement flow.  ``s`` uses the full phase rate; the
    Lagrangian form is kept alongside as ``s_lagrangian`` for cross-checking."""
    t_eval = _time_samples(horizon, t_eval)

    def rhs(t, y):
        return _h4_rates(cs, y, t)

    sol, ys, fired, t_end = _integrate(rhs, [init.alpha, init.beta, init.s, init.s], horizon,
                                       t_eval, what="h4")
    if fired:
        raise IntegrationError("h4 integration stopped early", fired[0][0])
    return H4Trajectory(t_eval[: ys.shape[1]], ys, sol, t_end)


def _su2_rates(tp, t0, tm, a, b, c, k1, k2, k3):
    e2 = np.exp(-2.0 * t0)
    dtp = a * tp * tp - 2.0 * c * tp - k2 * e2 + b
    dtm = a * e2 - k2 * tm * tm + 2.0 * k3 * tm - k1
    dt0 = k2 * tm - a * tp + c - k3
    return dtp, dt0, dtm


def _pack(z):
    return [z.real, z.imag]


def _unpack_su2(y, i=0):
    return (y[i] + 1j * y[i + 1], y[i + 2] + 1j * y[i + 3], y[i + 4] + 1j * y[i + 5])


def _divergence_events(offset, bound_plus, bound0):
    @_terminal
    def plus(t, y):
        return bound_plus - math.hypot(y[offset], y[offset + 1])

    @_terminal
    def zero(t, y):
        return bound0 - abs(y[offset + 2])

    return [plus, zero], ["theta_plus", "theta0"]


def _su2_initial(init: Su2State):
    return [complex(init.theta_plus).real, complex(init.theta_plus).imag,
            complex(init.theta0).real, complex(init.theta0).imag,
            complex(init.theta_minus).real, complex(init.theta_minus).imag]


def _events_from(fired, names, default="theta_plus"):
    out = []
    for t, which in fired:
        if which == "integration-failure":
            out.append(DivergenceEvent(t, default, "integration-failure"))
        else:
            out.append(DivergenceEvent(t, names[which], "bound"))
    return out


def evolve_su2(cs: CoefficientSet, ks: KSet | None = None, init: Su2State = Su2State(),
               horizon: float = 10.0, t_eval=None, bound_plus: float = THETA_PLUS_BOUND,
               bound0: float = THETA0_BOUND) -> Su2Trajectory:
    """Integrate the su(2) flow for a given target frame ``ks``.

    Crossing either bound stops the integration and records a DivergenceEvent;
    the returned trajectory is truncated there.
    """
    ks = KSet.zero() if ks is None else ks
    t_eval = _time_samples(horizon, t_eval)

    def rhs(t, y):
        tp, t0, tm = _unpack_su2(y)
        a, b, c = cs.a(t), cs.b(t), cs.c(t)
        k1, k2, k3 = ks.values(t)
        dtp, dt0, dtm = _su2_rates(tp, t0, tm, a, b, c, k1, k2, k3)
        return [dtp.real, dtp.imag, dt0.real, dt0.imag, dtm.real, dtm.imag]

    evs, names = _divergence_events(0, bound_plus, bound0)
    sol, ys, fired, t_end = _integrate(rhs, _su2_initial(init), horizon, t_eval, evs, "su2")
    tp, t0, tm = _unpack_su2(ys)
    return Su2Trajectory(t_eval[: ys.shape[1]], tp, t0, tm, sol, t_end,
                         _events_from(fired, names), unpack=_unpack_su2)


def _k_rates(k1, k2, k3, a, b, c):
    return 2 * c * k1 - 2 * a * k3, 2 * b * k3 - 2 * c * k2, b * k1 - a * k2


def evolve_K(cs: CoefficientSet, initK=(1.0, 1.0, 0.0), horizon: float = 10.0,
             t_eval=None) -> KTrajectory:
    """Integrate the invariance flow of (K1, K2, K3)."""
    t_eval = _time_samples(horizon, t_eval)

    def rhs(t, y):
        return _k_rates(y[0], y[1], y[2], cs.a(t), cs.b(t), cs.c(t))

    sol, ys, fired, t_end = _integrate(rhs, list(initK), horizon, t_eval, what="K")
    if fired:
        raise IntegrationError("K integration stopped early", fired[0][0])
    return KTrajectory(t_eval[: ys.shape[1]], ys, sol, t_end, cs)


def k_tracking_defect(cs: CoefficientSet, horizon: float, n: int = 2001) -> float:
    """Largest residual of the K flow when K = (a, b, c) is substituted.

    Zero means the original quadratic part is itself an invariant frame.
    """
    ts = np.linspace(0.0, horizon, n)
    a, b, c = cs.a(ts), cs.b(ts), cs.c(ts)
    r1, r2, r3 = _k_rates(a, b, c, a, b, c)
    res = np.abs(np.vstack([cs.a.derivative()(ts) - r1, cs.b.derivative()(ts) - r2,
                            cs.c.derivative()(ts) - r3]))
    return float(res.max())


@dataclass
class CoupledTrajectory:
    h4: H4Trajectory
    su2: Su2Trajectory
    K: KTrajectory


def evolve_coupled(cs: CoefficientSet, h4_init: H4State = H4State(), su2_init: Su2State = Su2State(),
                   initK=(1.0, 1.0, 0.0), horizon: float = 10.0, t_eval=None,
                   bound_plus: float = THETA_PLUS_BOUND, bound0: float = THETA0_BOUND) -> CoupledTrajectory:
    """Joint integration of (alpha, beta, s, theta's, K's) for the tracked frame."""
    t_eval = _time_samples(horizon, t_eval)

    def rhs(t, y):
        dal, dbe, ds, ds_lag = _h4_rates(cs, y, t)
        tp, t0, tm = _unpack_su2(y, 4)
        k1, k2, k3 = y[10], y[11], y[12]
        a, b, c = cs.a(t), cs.b(t), cs.c(t)
        dtp, dt0, dtm = _su2_rates(tp, t0, tm, a, b, c, k1, k2, k3)
        dk = _k_rates(k1, k2, k3, a, b, c)
        return [dal, dbe, ds, ds_lag, dtp.real, dtp.imag, dt0.real, dt0.imag,
                dtm.real, dtm.imag, *dk]

    y0 = [h4_init.alpha, h4_init.beta, h4_init.s, h4_init.s, *_su2_initial(su2_init), *initK]
    evs, names = _divergence_events(4, bound_plus, bound0)
    sol, ys, fired, t_end = _integrate(rhs, y0, horizon, t_eval, evs, "coupled")
    ts = t_eval[: ys.shape[1]]
    h4 = H4Trajectory(ts, ys[:4], sol, t_end)
    tp, t0, tm = _unpack_su2(ys, 4)
    su2 = Su2Trajectory(ts, tp, t0, tm, sol, t_end, _events_from(fired, names),
                        unpack=lambda y: _unpack_su2(y, 4))
    K = KTrajectory(ts, ys[10:13], sol, t_end, cs, offset=10)
    return CoupledTrajectory(h4, su2, K)


def riccati_via_linear(cs: CoefficientSet, horizon: float = 10.0, t_eval=None,
                       theta_plus0: float = 0.0, bound: float = THETA_PLUS_BOUND):
    """su(2) parameters of the K = 0 frame from the linear equation
    u'' + (2c - a'/a) u' + a b u = 0,  theta_plus = -u'/(a u).

    Returns (Su2Trajectory, AuxiliarySolution).  A zero of u is a pole of
    theta_plus and ends the trajectory with a ``pole`` event.
    """
    cs.require_nonzero_a(max(horizon, 1e-12))
    t_eval = _time_samples(horizon, t_eval)
    da = cs.a.derivative()

    def rhs(t, y):
        u, du, C, tm = y
        a, b, c = cs.a(t), cs.b(t), cs.c(t)
        ddu = -(2.0 * c - da(t) / a) * du - a * b * u
        dtm = a * math.exp(-2.0 * C) / (u * u)
        return [du, ddu, c, dtm]

    @_terminal
    def u_zero(t, y):
        return y[0]

    @_terminal
    def tm_bound(t, y):
        return bound - abs(y[3])

    u0 = 1.0
    y0 = [u0, -cs.a(0.0) * theta_plus0 * u0, 0.0, 0.0]
    sol, ys, fired, t_end = _integrate(rhs, y0, horizon, t_eval, [u_zero, tm_bound], "riccati")
    events = []
    for t_ev, which in fired:
        if which == 1:
            # theta_minus saturates just before u vanishes; locate the zero by a Newton step
            u, du = sol(t_ev)[:2]
            t_ev = t_ev - u / du if du != 0 else t_ev
        events.append(DivergenceEvent(float(t_ev), "theta_plus", "pole"))

    def at_unpack_factory():
        def unpack_at(t):
            y = sol(t)
            u, du, C, tm = y
            return -du / (cs.a(t) * u), C + np.log(u / u0), tm
        return unpack_at

    ts = t_eval[: ys.shape[1]]
    u, du, C, tm = ys
    with np.errstate(divide="ignore", invalid="ignore"):
        tp = -du / (cs.a(ts) * u)
        t0 = C + np.log(u / u0)
    traj = _RiccatiTrajectory(ts, tp, t0, tm, sol, t_end, events, at_unpack_factory())
    aux = AuxiliarySolution("riccati-u", ts, u, du, {"u0": u0}, events, sol, t_end)
    return traj, aux


class _RiccatiTrajectory(Su2Trajectory):
    def __init__(self, t, tp, t0, tm, sol, t_end, events, unpack_at):
        super().__init__(t, tp, t0, tm, sol, t_end, events)
        self._unpack_at = unpack_at

    def at(self, t) -> Su2State:
        self._dense(t)  # range check
        tp, t0, tm = self._unpack_at(float(t))
        return Su2State(complex(tp), complex(t0), complex(tm))


def ermakov_solve(cs: CoefficientSet, rho0: float = 1.0, rhodot0: float = 0.0, Omega: float = 1.0,
                  horizon: float = 10.0, t_eval=None, route: str = "real",
                  floor: float = 1e-8) -> AuxiliarySolution:
    """Auxiliary function rho(t) of the invariant construction.

    route="real":    rho'' + chi rho' + xi rho = Omega^2 a^2 / rho^3
    route="complex": rho'' + (2c - a'/a) rho' + a b rho = a^2 e^{-4 int c} / rho^3
    (the second builds complex theta's; Omega is fixed to 1 there).
    rho falling below ``floor`` * rho0 is recorded as a singularity event.
    """
    if not rho0 > 0:
        raise ParameterError("rho0 must be positive")
    if route not in ("real", "complex"):
        raise ParameterError("route must be 'real' or 'complex'")
    cs.require_nonzero_a(max(horizon, 1e-12))
    t_eval = _time_samples(horizon, t_eval)
    da, dc = cs.a.derivative(), cs.c.derivative()
    W2 = Omega * Omega if route == "real" else 1.0

    def rhs(t, y):
        r, dr, C = y
        a, b, c = cs.a(t), cs.b(t), cs.c(t)
        ad = da(t)
        if route == "real":
            chi = -ad / a
            xi = a * b + ad * c / a - c * c - dc(t)
            ddr = -chi * dr - xi * r + W2 * a * a / r ** 3
        else:
            ddr = -(2.0 * c - ad / a) * dr - a * b * r + a * a * math.exp(-4.0 * C) / r ** 3
        return [dr, ddr, c]

    @_terminal
    def collapse(t, y):
        return y[0] - floor * rho0

    sol, ys, fired, t_end = _integrate(rhs, [rho0, rhodot0, 0.0], horizon, t_eval, [collapse],
                                       "ermakov")
    events = [DivergenceEvent(t, "rho", "singularity") for t, _ in fired]
    ts = t_eval[: ys.shape[1]]
    return AuxiliarySolution("ermakov-rho", ts, ys[0], ys[1],
                             {"Omega": Omega if route == "real" else 1.0, "rho0": rho0,
                              "rhodot0": rhodot0, "route": route}, events, sol, t_end)


def ks_from_rho(aux: AuxiliarySolution, cs: CoefficientSet, Omega: float | None = None) -> KSet:
    """Invariant-frame K's built from a real-route Ermakov solution:
    K1 = rho^2, K2 = Omega^2/rho^2 + g^2, K3 = rho g with g = (c rho - rho')/a."""
    if aux.kind != "ermakov-rho" or aux.constants.get("route") != "real":
        raise ParameterError("ks_from_rho needs a real-route Ermakov solution")
    W = aux.constants["Omega"] if Omega is None else Omega
    if not math.isclose(W, aux.constants["Omega"]):
        raise ParameterError("Omega does not match the Ermakov solution")
    cs.require_nonzero_a(max(aux.t_end, 1e-12))
    da, dc = cs.a.derivative(), cs.c.derivative()

    def parts(t):
        r, dr = aux(t)
        a, b, c = cs.a(t), cs.b(t), cs.c(t)
        ad = da(t)
        chi = -ad / a
        xi = a * b + ad * c / a - c * c - dc(t)
        ddr = -chi * dr - xi * r + W * W * a * a / r ** 3
        g = (c * r - dr) / a
        dg = (dc(t) * r + c * dr - ddr) / a - g * ad / a
        return r, dr, g, dg

    def K1(t):
        r, *_ = parts(t)
        return r * r

    def dK1(t):
        r, dr, *_ = parts(t)
        return 2 * r * dr

    def K2(t):
        r, _, g, _ = parts(t)
        return W * W / (r * r) + g * g

    def dK2(t):
        r, dr, g, dg = parts(t)
        return -2 * W * W * dr / r ** 3 + 2 * g * dg

    def K3(t):
        r, _, g, _ = parts(t)
        return r * g

    def dK3(t):
        r, dr, g, dg = parts(t)
        return dr * g + r * dg

    return KSet(Sampled(K1, dK1, "K1"), Sampled(K2, dK2, "K2"), Sampled(K3, dK3, "K3"))


def complex_su2(cs: CoefficientSet, rho0: float = 1.0, rhodot0: float = 0.0, horizon: float = 10.0,
                t_eval=None) -> tuple[Su2Trajectory, AuxiliarySolution]:
    """Complex theta's of the K = 0 frame from the complex-route Ermakov function:
    theta_plus = -rho'/(a rho) - i e^{-2C}/rho^2,
    theta0 = C + ln(rho/rho0) + i int a e^{-2C}/rho^2,  C = int c,
    theta_minus by quadrature of a e^{-2 theta0}."""
    cs.require_nonzero_a(max(horizon, 1e-12))
    t_eval = _time_samples(horizon, t_eval)
    da = cs.a.derivative()

    def rhs(t, y):
        r, dr, C, I, mr, mi = y
        a, b, c = cs.a(t), cs.b(t), cs.c(t)
        w = math.exp(-2.0 * C)
        ddr = -(2.0 * c - da(t) / a) * dr - a * b * r + a * a * w * w / r ** 3
        dI = a * w / (r * r)
        dtm = a * w * (rho0 / r) ** 2 * np.exp(-2j * I)
        return [dr, ddr, c, dI, dtm.real, dtm.imag]

    @_terminal
    def collapse(t, y):
        return y[0] - 1e-8 * rho0

    sol, ys, fired, t_end = _integrate(rhs, [rho0, rhodot0, 0.0, 0.0, 0.0, 0.0], horizon, t_eval,
                                       [collapse], "complex-ermakov")
    events = [DivergenceEvent(t, "rho", "singularity") for t, _ in fired]

    def unpack_at(t):
        r, dr, C, I, mr, mi = sol(t)
        a = cs.a(t)
        tp = -dr / (a * r) - 1j * math.exp(-2.0 * C) / r ** 2
        return tp, C + math.log(r / rho0) + 1j * I, mr + 1j * mi

    ts = t_eval[: ys.shape[1]]
    r, dr, C, I, mr, mi = ys
    tp = -dr / (cs.a(ts) * r) - 1j * np.exp(-2.0 * C) / r ** 2
    t0 = C + np.log(r / rho0) + 1j * I
    traj = _RiccatiTrajectory(ts, tp, t0, mr + 1j * mi, sol, t_end, events, unpack_at)
    aux = AuxiliarySolution("ermakov-rho", ts, r, dr, {"Omega": 1.0, "rho0": rho0,
                                                      "rhodot0": rhodot0, "route": "complex"},
                            events, sol, t_end)
    return traj, aux


def ck_sigma(gamma: float, sigma0: float, t):
    """Closed-form homogeneous damped solution with sigma(0)=sigma0, sigma'(0)=0."""
    if not 0 <= gamma < 1:
        raise ParameterError("ck_sigma needs 0 <= gamma < 1")
    w = math.sqrt(1.0 - gamma * gamma)
    t = np.asarray(t, dtype=float)
    return sigma0 * np.exp(-gamma * t) * (np.cos(w * t) + gamma / w * np.sin(w * t))


def divergence_times(gamma: float, t_max: float | None = None, count: int | None = None) -> list[float]:
    """Ascending roots of cot(w t) = -gamma/w, w = sqrt(1 - gamma^2)."""
    if not 0 <= gamma < 1:
        raise ParameterError("divergence_times needs 0 <= gamma < 1")
    if t_max is None and count is None:
        count = 1
    w = math.sqrt(1.0 - gamma * gamma)
    base = (math.pi / 2 + math.atan(gamma / w)) / w
    step = math.pi / w
    out = []
    k = 0
    while True:
        tk = base + k * step
        if (t_max is not None and tk > t_max) or (count is not None and len(out) >= count):
            break
        out.append(tk)
        k += 1
    return out


def bracket_divergence(gamma: float, k: int = 0) -> float:
    """Independent check of the k-th divergence time by bracketing the zero of sigma."""
    w = math.sqrt(1.0 - gamma * gamma)
    lo, hi = (k * math.pi + 1e-9) / w, ((k + 1) * math.pi - 1e-9) / w
    return float(brentq(lambda t: float(ck_sigma(gamma, 1.0, t)), lo, hi, xtol=1e-14))


def require_finite_state(state: Su2State, time: float | None = None) -> None:
    for v in (state.theta_plus, state.theta0, state.theta_minus):
        if not np.isfinite(complex(v)):
            raise DivergenceError("non-finite transformation parameter", time)
