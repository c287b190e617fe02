"""Scenarios that combine coefficients, parameter flows and the grid engine,
the invariant operators that go with them, and closed-form solutions for the
moving-wall well, the posmom frame and the damped free particle."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.integrate import quad

from .coeffs import CoefficientSet, Constant, TimeFunction, time_function
from .errors import (DivergenceError, ParameterError, ResolutionError, WellPoleWarning)
from .flows import (DivergenceEvent, H4State, KSet, Su2State, evolve_coupled, evolve_h4,
                    evolve_su2, ermakov_solve, ks_from_rho, riccati_via_linear)
from .quantum import (Grid, Moments, WaveState, apply_lie, dilate, direct_propagate, free_step,
                      moments, symplectic_matrix)
from .quantum.states import eigenstate, hermite_function, posmom_function, well_function

K_KINDS = ("zero", "constant", "free-particle", "posmom", "ermakov", "tracked")


@dataclass(frozen=True)
class KStrategy:
    """Choice of target frame.

    zero:           no params
    constant:       K = (K1, K2, K3)
    free-particle:  K(t) multiplying P^2/2
    posmom:         K(t) multiplying (XP+PX)/2
    ermakov:        Omega, rho0, rhodot0 (invariant frame from the auxiliary equation)
    tracked:        K0 = initial values of the K flow
    """

    kind: str = "zero"
    K: tuple = ()
    Kt: object = None
    Omega: float = 1.0
    rho0: float = 1.0
    rhodot0: float = 0.0

    def __post_init__(self):
        if self.kind not in K_KINDS:
            raise ParameterError(f"unknown K strategy {self.kind!r}")
        if self.kind in ("constant", "tracked") and len(self.K) != 3:
            raise ParameterError(f"K strategy {self.kind!r} needs three K values")
        if self.kind in ("free-particle", "posmom"):
            object.__setattr__(self, "Kt", time_function(1.0 if self.Kt is None else self.Kt))


@dataclass(frozen=True)
class Scenario:
    name: str
    coefficients: CoefficientSet
    k_strategy: KStrategy = KStrategy()
    initial: dict = field(default_factory=lambda: {"kind": "hermite", "n": 0})
    grid: Grid = Grid(-20.0, 20.0, 1024)
    horizon: float = 10.0
    dt_output: float = 0.1
    center: tuple = (0.0, 0.0)
    dt_propagate: float = 1e-3
    reference: tuple = (1.0, 1.0, 0.0)

    def output_times(self) -> np.ndarray:
        if self.horizon < 0 or self.dt_output <= 0:
            raise ParameterError("need horizon >= 0 and dt_output > 0")
        n = int(math.floor(self.horizon / self.dt_output + 1e-9))
        return np.arange(n + 1) * self.dt_output

    def validate(self) -> None:
        ks = self.k_strategy
        self.output_times()
        if ks.kind == "constant" and self.initial.get("kind") == "hermite":
            K1, K2, _ = ks.K
            if not (K1 > 0 and K2 > 0):
                raise ParameterError("constant K frame with a number state needs K1, K2 > 0")
            a0, b0 = self.coefficients.a(0.0), self.coefficients.b(0.0)
            if not (a0 > 0 and b0 > 0):
                raise ParameterError("constant harmonic K frame needs a harmonic H(0)")
        if _needs_numeric_frame(self):
            ratio = self.dt_output / self.dt_propagate
            if abs(ratio - round(ratio)) > 1e-9:
                raise ParameterError("dt_output must be a multiple of dt_propagate")


def initial_state(spec: dict, grid: Grid) -> WaveState:
    """Build psi0 from {"kind": ..., params} or {"superposition": [[re, im, spec], ...]}."""
    if "superposition" in spec:
        parts = spec["superposition"]
        if not parts:
            raise ParameterError("empty superposition")
        psi = np.zeros(grid.N, dtype=complex)
        for re, im, sub in parts:
            psi = psi + complex(re, im) * initial_state(sub, grid).psi
        return WaveState(grid, psi).normalized()
    params = {k: v for k, v in spec.items() if k != "kind"}
    return eigenstate(spec.get("kind", "hermite"), grid, **params)


def _hermite_components(spec: dict):
    """[(coef, n, omega)] if the spec is a (superposition of) hermite state(s)."""
    if spec.get("kind") == "hermite":
        return [(1.0, int(spec.get("n", 0)), float(spec.get("omega", 1.0)))]
    if "superposition" in spec:
        out = []
        for re, im, sub in spec["superposition"]:
            inner = _hermite_components(sub)
            if inner is None or len(inner) != 1:
                return None
            out.append((complex(re, im), inner[0][1], inner[0][2]))
        return out
    return None


def _needs_numeric_frame(sc: Scenario) -> bool:
    ks = sc.k_strategy
    if ks.kind in ("ermakov", "tracked"):
        return True
    if ks.kind == "constant":
        comps = _hermite_components(sc.initial)
        K1, K2, K3 = ks.K
        if comps is None or K3 != 0 or K1 <= 0 or K2 <= 0:
            return True
        w = math.sqrt(K2 / K1)
        return any(not math.isclose(om, w, rel_tol=1e-12) for _, _, om in comps)
    return False


def cumulative_integral(g: TimeFunction, ts) -> np.ndarray:
    """int_0^t g for each t in the increasing array ts."""
    ts = np.asarray(ts, dtype=float)
    out = np.zeros(ts.size)
    if g.is_constant():
        return g(0.0) * ts
    acc, prev = 0.0, 0.0
    for i, t in enumerate(ts):
        if t > prev:
            acc += quad(lambda s: float(g(s)), prev, t, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        out[i] = acc
        prev = t
    return out


@dataclass
class InvariantOperator:
    """I = 1/2 w^T Q w (symmetrized) with w = (X - alpha, P + beta)."""

    Q: np.ndarray
    alpha: float = 0.0
    beta: float = 0.0

    @classmethod
    def from_lie(cls, h4: H4State, su2: Su2State, K=(1.0, 1.0, 0.0)) -> "InvariantOperator":
        """U H_K U^-1 for a constant frame Hamiltonian H_K."""
        M = symplectic_matrix(su2)
        if np.any(np.abs(M.imag) > 0):
            raise ParameterError("invariant pull-back needs real transformation parameters")
        Minv = np.linalg.inv(M.real)
        QK = np.array([[K[1], K[2]], [K[2], K[0]]], dtype=float)
        return cls(Minv.T @ QK @ Minv, h4.alpha, h4.beta)

    @classmethod
    def from_ks(cls, K, h4: H4State = H4State()) -> "InvariantOperator":
        """K-form in the lab frame: invariant whenever K follows the K flow."""
        K1, K2, K3 = (float(v) for v in K)
        return cls(np.array([[K2, K3], [K3, K1]]), h4.alpha, h4.beta)


def invariant_expectation(inv: InvariantOperator, state: WaveState, derivative: str = "spectral") -> float:
    """<psi|I|psi> by quadrature; ``derivative`` is "spectral" or "fd" (second-order
    differences, better for states with kinks such as hard-wall wells)."""
    g = state.grid
    psi = np.asarray(state.psi)
    xs = g.x - inv.alpha
    if derivative == "spectral":
        dpsi = np.fft.ifft(g.k * np.fft.fft(psi))
        ppsi = dpsi + inv.beta * psi
        pp = float(np.sum(np.abs(ppsi) ** 2) * g.dx)
    elif derivative == "fd":
        fwd = (np.roll(psi, -1) - psi) / g.dx
        mid = 0.5 * (np.roll(psi, -1) + psi)
        # rms of forward differences: second-order when kinks sit on grid nodes
        pp = float(np.sum(np.abs(-1j * fwd + inv.beta * mid) ** 2) * g.dx)
        ppsi = -1j * (np.roll(psi, -1) - np.roll(psi, 1)) / (2 * g.dx) + inv.beta * psi
    else:
        raise ParameterError("derivative must be 'spectral' or 'fd'")
    xx = float(np.sum(np.abs(psi) ** 2 * xs * xs) * g.dx)
    cross = 2.0 * float(np.real(np.vdot(xs * psi, ppsi)) * g.dx)
    Q = inv.Q
    return 0.5 * (Q[0, 0] * xx + Q[1, 1] * pp + Q[0, 1] * cross)


@dataclass
class ScenarioResult:
    scenario: Scenario
    times: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    s: np.ndarray
    theta_plus: np.ndarray
    theta0: np.ndarray
    theta_minus: np.ndarray
    K: np.ndarray
    states: list
    moments: list
    invariant: np.ndarray
    events: list

    @property
    def densities(self) -> np.ndarray:
        return np.array([st.density() for st in self.states]).reshape(len(self.states), -1)

    @property
    def norms(self) -> np.ndarray:
        return np.array([m.norm for m in self.moments])

    @property
    def truncated(self) -> bool:
        return bool(self.events)


def _frame_states(sc: Scenario, psi0: WaveState, times, kvals) -> list:
    """psi(t) in the target frame at each output time."""
    ks = sc.k_strategy
    kind = ks.kind
    if kind == "zero":
        return [psi0] * len(times)
    if kind == "free-particle":
        integ = cumulative_integral(ks.Kt, times)
        return [free_step(psi0, r) for r in integ]
    if kind == "posmom":
        integ = cumulative_integral(ks.Kt, times)
        return [dilate(psi0, r) for r in integ]
    if kind == "constant" and not _needs_numeric_frame(sc):
        K1, K2, _ = ks.K
        w = math.sqrt(K2 / K1)
        E0 = math.sqrt(K1 * K2)
        basis = [(hermite_function(n, sc.grid.x, w), E0 * (n + 0.5))
                 for _, n, _ in _hermite_components(sc.initial)]
        return _eigenphase_evolution(psi0, basis, times)
    cs_K = CoefficientSet(kvals[0], kvals[1], kvals[2], Constant(0.0), Constant(0.0), Constant(0.0))
    horizon = float(times[-1])
    res = direct_propagate(cs_K, psi0, horizon, sc.dt_propagate, t_out=times)
    return res.states


def _eigenphase_evolution(psi0: WaveState, basis, times) -> list:
    """Evolve psi0 by the eigenphases of ``basis`` [(phi_n, E_n)].

    psi0 is projected on the basis; the round-off remainder is carried along
    unchanged so that t = 0 reproduces psi0 exactly.
    """
    dx = psi0.grid.dx
    coefs = [np.vdot(phi, psi0.psi) * dx for phi, _ in basis]
    resid = psi0.psi - sum(c * phi for c, (phi, _) in zip(coefs, basis))
    return [psi0.replace(resid + sum(c * phi * np.exp(-1j * E * t)
                                     for c, (phi, E) in zip(coefs, basis)))
            for t in times]


@dataclass
class ScenarioFlows:
    """Parameter trajectories of a scenario, truncated at the first divergence."""

    times: np.ndarray
    h4: object
    su2: object
    kset: KSet
    events: list


def scenario_flows(sc: Scenario, times=None) -> ScenarioFlows:
    """Integrate (alpha, beta, s), the theta's and, when tracked, the K's."""
    times = sc.output_times() if times is None else np.asarray(times, dtype=float)
    horizon = float(times[-1]) if times.size else 0.0
    cs = sc.coefficients
    ks = sc.k_strategy
    h4_init = H4State(sc.center[0], -sc.center[1], 0.0)
    events: list = []
    try:
        if ks.kind == "tracked":
            traj = evolve_coupled(cs, h4_init, Su2State(), ks.K, horizon, t_eval=times)
            h4, su2 = traj.h4, traj.su2
            kset = traj.K.as_kset()
        else:
            h4 = evolve_h4(cs, h4_init, horizon, t_eval=times)
            if ks.kind == "zero":
                kset = KSet.zero()
            elif ks.kind == "constant":
                kset = KSet.constant(*ks.K)
            elif ks.kind == "free-particle":
                kset = KSet(ks.Kt, Constant(0.0), Constant(0.0))
            elif ks.kind == "posmom":
                kset = KSet(Constant(0.0), Constant(0.0), ks.Kt)
            else:
                aux = ermakov_solve(cs, ks.rho0, ks.rhodot0, ks.Omega, horizon)
                events.extend(aux.events)
                kset = ks_from_rho(aux, cs, ks.Omega)
            end = _aux_end(events, horizon)
            su2 = evolve_su2(cs, kset, Su2State(), min(horizon, end),
                             t_eval=times[times <= end + 1e-12])
    except DivergenceError as exc:
        raise DivergenceError(f"scenario {sc.name!r}: {exc}", exc.time) from exc
    events.extend(su2.events)
    return ScenarioFlows(times[: su2.theta_plus.size], h4, su2, kset, events)


def run_scenario(sc: Scenario) -> ScenarioResult:
    """Integrate the parameter flows, evolve the frame state and rebuild Psi(X, t)."""
    sc.validate()
    flows = scenario_flows(sc)
    times, h4, su2, kset, events = flows.times, flows.h4, flows.su2, flows.kset, flows.events
    psi0 = initial_state(sc.initial, sc.grid)
    kvals = (kset.K1, kset.K2, kset.K3)
    frames = _frame_states(sc, psi0, times, kvals) if times.size else []
    states, mom, inv_vals = [], [], []
    Kout = np.zeros((3, times.size))
    for i, t in enumerate(times):
        hs = H4State(float(h4.alpha[i]), float(h4.beta[i]), float(h4.s[i]))
        ss = Su2State(su2.theta_plus[i], su2.theta0[i], su2.theta_minus[i])
        try:
            st = apply_lie(frames[i], hs, ss)
        except ResolutionError as exc:
            events.append(DivergenceEvent(float(t), "grid", f"resolution: {exc}"))
            times = times[:i]
            break
        Kout[:, i] = [float(k(t)) for k in kvals]
        states.append(st)
        mom.append(moments(st) if st.normalizable else Moments(*(np.nan,) * 4, st.norm()))
        inv_vals.append(_scenario_invariant(sc, hs, ss, Kout[:, i], st))
    n = len(states)
    return ScenarioResult(sc, times[:n], h4.alpha[:n], h4.beta[:n], h4.s[:n],
                          su2.theta_plus[:n], su2.theta0[:n], su2.theta_minus[:n], Kout[:, :n],
                          states, mom, np.array(inv_vals), events)


def _aux_end(events, horizon):
    return min([horizon] + [e.time for e in events])


def reference_form(sc: Scenario):
    """Quadratic form in the frame whose pull-back is conserved, or None for lab-frame K's."""
    ks = sc.k_strategy
    if ks.kind == "zero":
        return tuple(sc.reference)
    if ks.kind == "constant":
        return tuple(ks.K)
    if ks.kind == "free-particle":
        return (1.0, 0.0, 0.0)
    if ks.kind == "posmom":
        return (0.0, 0.0, 1.0)
    return None


def scenario_invariant(sc: Scenario, h4: H4State, su2: Su2State, K) -> InvariantOperator:
    ref = reference_form(sc)
    if ref is None:
        return InvariantOperator.from_ks(K, h4)
    return InvariantOperator.from_lie(h4, su2, ref)


def _scenario_invariant(sc, h4, su2, K, state):
    if not state.normalizable or not su2.is_real():
        return float("nan")
    return invariant_expectation(scenario_invariant(sc, h4, su2, K), state)


# ---------------------------------------------------------------- closed forms

def _check_width(L: TimeFunction, t: float) -> float:
    Lt = float(L(t))
    if Lt <= 0:
        raise ParameterError(f"well width L({t}) = {Lt} is not positive")
    return Lt


def accelerated_well_omega0(L, t: float) -> float:
    """Diagnostic frequency sqrt(L''/L) L^2 / sqrt(1 - L^4) of the accelerated wall
    (positive root).  Raises at the L = 1 pole and where it is not real."""
    L = time_function(L)
    Lt = _check_width(L, t)
    ddL = float(L.derivative().derivative()(t))
    den = 1.0 - Lt ** 4
    if abs(den) < 1e-12:
        raise DivergenceError("accelerated-wall frequency has a pole at L = 1", t)
    val = ddL / Lt / den
    if val < 0:
        raise ParameterError("accelerated-wall frequency is imaginary here")
    return math.sqrt(val) * Lt * Lt


class WellSolution:
    """Exact state of a particle in a hard-wall well of width L(t) with force f(t).

    The coefficient set is ``free_well(L, force)``: a = 1 and b = -L''/L.  With
    theta0 = ln L, theta_plus = -L'/L the frame is a unit well with kinetic
    term P^2/(2 L^2), so each level only picks up the phase
    exp(-i n^2 pi^2/2 int L^-2).  The walls sit at alpha(t) and alpha(t) + L(t).
    """

    def __init__(self, L, force=0.0, horizon: float = 10.0, x0: float = 0.0, p0: float = 0.0):
        from .coeffs import free_well

        self.L = time_function(L)
        self.force = time_function(force)
        self.cs = free_well(self.L, self.force, horizon=max(horizon, 1e-9))
        self.horizon = horizon
        ddL = self.L.derivative().derivative()
        ts = np.linspace(0.0, horizon, 257)
        self.accelerated = bool(np.any(np.abs(ddL(ts)) > 0))
        if self.accelerated and abs(self.L(0.0) - 1.0) < 1e-12:
            warnings.warn("accelerated wall starts at L = 1, where the frequency diagnostic has a pole",
                          WellPoleWarning, stacklevel=2)
        self.h4 = evolve_h4(self.cs, H4State(x0, -p0, 0.0), horizon)
        self._inv_L2 = Constant(1.0) / (self.L * self.L)

    def parameters(self, t: float):
        Lt = _check_width(self.L, t)
        dL = float(self.L.derivative()(t))
        return self.h4.at(t), Su2State(-dL / Lt, math.log(Lt), 0.0)

    def phase_integral(self, t: float) -> float:
        return float(cumulative_integral(self._inv_L2, [t])[0])

    def __call__(self, n: int, t: float, x) -> np.ndarray:
        h, su = self.parameters(t)
        Lt = math.exp(su.theta0.real)
        y = np.asarray(x, dtype=float) - h.alpha
        amp = well_function(n, y / Lt) / math.sqrt(Lt)
        phase = (-h.s - h.beta * y - 0.5 * su.theta_plus.real * y * y
                 - 0.5 * (n * math.pi) ** 2 * self.phase_integral(t))
        return amp * np.exp(1j * phase)

    def state(self, n: int, t: float, grid: Grid) -> WaveState:
        return WaveState(grid, self(n, t, grid.x))

    def instantaneous_eigenstate(self, n: int, t: float, grid: Grid) -> WaveState:
        """sin-mode of the current well [alpha, alpha + L] (no chirp)."""
        h, _ = self.parameters(t)
        return WaveState(grid, well_function(n, grid.x, float(self.L(t)), h.alpha))

    def invariant_eigenstate(self, n: int, t: float, grid: Grid) -> WaveState:
        """Eigenstate of the invariant at time t: the solution without its time phase."""
        psi = self(n, t, grid.x) * np.exp(0.5j * (n * math.pi) ** 2 * self.phase_integral(t))
        return WaveState(grid, psi)

    def invariant(self, t: float) -> InvariantOperator:
        h, su = self.parameters(t)
        return InvariantOperator.from_lie(h, su, (1.0, 0.0, 0.0))


def well_solution(L, n: int, force=0.0, t: float = 0.0, grid: Grid | None = None,
                  x0: float = 0.0, p0: float = 0.0) -> WaveState:
    grid = grid or Grid(-0.5, 2.5, 1024)
    return WellSolution(L, force, horizon=max(t, 1e-9), x0=x0, p0=p0).state(n, t, grid)


def free_space_posmom(tau: float, xi: float, X0: float, y) -> np.ndarray:
    """exp(-i tau P^2/2) applied to the posmom eigenfunction, via parabolic cylinder functions."""
    y = np.asarray(y, dtype=float)
    if tau == 0:
        return posmom_function(y, xi, X0)
    nu = mpmath.mpc(0.5, xi)
    beta = mpmath.mpc(0, -1) / (2 * tau)
    pref = (mpmath.mpf(2 * math.pi) ** -0.5 * mpmath.power(X0, mpmath.mpc(0.5, -xi))
            / mpmath.sqrt(mpmath.mpc(0, 2 * math.pi * tau)))
    a2b = mpmath.sqrt(2 * beta)
    c1 = mpmath.power(2 * beta, -nu / 2) * mpmath.gamma(nu)
    out = np.empty(y.shape, dtype=complex)
    for idx, yy in np.ndenumerate(y):
        gam = mpmath.mpc(0, yy / tau)
        val = (pref * mpmath.exp(mpmath.mpc(0, yy * yy / (2 * tau))) * c1
               * mpmath.exp(gam * gam / (8 * beta)) * mpmath.pcfd(-nu, gam / a2b))
        out[idx] = complex(val)
    return out


class PosmomSolution:
    """Exact Psi(X, t) for a posmom eigenfunction in the frame K(t)(XP+PX)/2."""

    def __init__(self, cs: CoefficientSet, K=1.0, xi: float = 0.5, X0: float = 1.0,
                 horizon: float = 10.0, x0: float = 0.0, p0: float = 0.0):
        if X0 <= 0:
            raise ParameterError("X0 must be positive")
        self.cs, self.K, self.xi, self.X0 = cs, time_function(K), xi, X0
        self.h4 = evolve_h4(cs, H4State(x0, -p0, 0.0), horizon)
        self.su2 = evolve_su2(cs, KSet(Constant(0.0), Constant(0.0), self.K), Su2State(), horizon)
        if self.su2.events:
            self.valid_until = self.su2.events[0].time
        else:
            self.valid_until = horizon

    def __call__(self, t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise ParameterError("posmom solution is evaluated for X > 0 only")
        if t > self.valid_until + 1e-12:
            raise DivergenceError("posmom parameters diverged", self.valid_until)
        h = self.h4.at(t)
        s = self.su2.at(t)
        tp, t0, tm = (complex(v).real for v in (s.theta_plus, s.theta0, s.theta_minus))
        y = x - h.alpha
        inner = np.exp(-0.5 * t0) * free_space_posmom(tm, self.xi, self.X0, np.exp(-t0) * y)
        phase = np.exp(-1j * (h.s + h.beta * y + 0.5 * tp * y * y))
        frame = np.exp(-1j * self.xi * cumulative_integral(self.K, [t])[0])
        return phase * inner * frame


def posmom_solution(cs: CoefficientSet, K, xi: float, X0: float, t: float, x, **kw) -> np.ndarray:
    return PosmomSolution(cs, K, xi, X0, horizon=max(t, 1e-9), **kw)(t, x)


class FreeParticleSolution:
    """Exact plane-wave solution: the frame removes the X^2 term entirely.

    rho solves the linear auxiliary equation with rho(0)=1, rho'(0)=0;
    theta_plus = -rho'/(a rho), theta0 = int c + ln rho.  The momentum of the
    initial plane wave is K0 = sign * sqrt(2 E0).
    """

    def __init__(self, cs: CoefficientSet, E0: float, horizon: float = 10.0, sign: float = -1.0,
                 x0: float = 0.0, p0: float = 0.0, K=None):
        if E0 < 0:
            raise ParameterError("E0 must be non-negative")
        self.cs, self.E0 = cs, E0
        self.K0 = math.copysign(math.sqrt(2.0 * E0), sign)
        self.h4 = evolve_h4(cs, H4State(x0, -p0, 0.0), horizon)
        self.su2, self.aux = riccati_via_linear(cs, horizon)
        self.pole = self.su2.first_divergence
        self.K = None if K is None else time_function(K)

    def __call__(self, t: float, x) -> np.ndarray:
        if self.pole is not None and t >= self.pole:
            raise DivergenceError("auxiliary rho crossed zero", self.pole)
        h = self.h4.at(t)
        s = self.su2.at(t)
        tp, t0, spread = (complex(v).real for v in (s.theta_plus, s.theta0, s.theta_minus))
        y = np.asarray(x, dtype=float) - h.alpha
        # frame phase: E0 int K plus what theta_minus leaves on the plane wave
        if self.K is None:
            frame_phase = self.E0 * spread
        else:
            intK = cumulative_integral(self.K, [t])[0]
            frame_phase = self.E0 * intK + 0.5 * self.K0 ** 2 * (spread - intK)
        amp = math.exp(-0.5 * t0) / math.sqrt(2.0 * math.pi)
        phase = -h.s - h.beta * y - 0.5 * tp * y * y + self.K0 * math.exp(-t0) * y - frame_phase
        return amp * np.exp(1j * phase)


def free_particle_solution(cs: CoefficientSet, K, E0: float, t: float, x, **kw) -> np.ndarray:
    return FreeParticleSolution(cs, E0, horizon=max(t, 1e-9), K=K, **kw)(t, x)


def schrodinger_residual(cs: CoefficientSet, fn, t: float, x, ht: float = 2e-4, hx: float = 2e-3):
    """i dPsi/dt - H Psi for a closed-form fn(t, x), by fourth-order central differences."""
    x = np.asarray(x, dtype=float)
    a, b, c, d, e, f = (float(v) for v in cs.values(t))
    psi = fn(t, x)
    dt = (8 * (fn(t + ht, x) - fn(t - ht, x)) - (fn(t + 2 * ht, x) - fn(t - 2 * ht, x))) / (12 * ht)
    xp, xm = fn(t, x + hx), fn(t, x - hx)
    xpp, xmm = fn(t, x + 2 * hx), fn(t, x - 2 * hx)
    d1 = (8 * (xp - xm) - (xpp - xmm)) / (12 * hx)
    d2 = (16 * (xp + xm) - (xpp + xmm) - 30 * psi) / (12 * hx * hx)
    P = -1j * d1
    P2 = -d2
    # c (XP+PX)/2 = c (X P - i/2)
    Hpsi = 0.5 * a * P2 + 0.5 * b * x * x * psi + c * (x * P - 0.5j * psi) + d * P + e * x * psi + f * psi
    return 1j * dt - Hpsi, psi
