import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from lieosc.classical import (DDHOParams, ddho_solution, homogeneous_constants, integrate_classical,
                              power_spectrum, resonant_frequency, response_sweep,
                              standard_form_residual, steady_response)
from lieosc.coeffs import caldirola_kanai, parametric
from lieosc.errors import OverdampedError, ParameterError, UnboundedResonanceError


def _reference(p: DDHOParams, ts):
    def rhs(t, y):
        return [y[1], p.F0 * math.cos(p.Omega * t + p.phi) - 2 * p.gamma * y[1] - p.omega0 ** 2 * y[0]]
    sol = solve_ivp(rhs, (0, ts[-1]), [p.x0, p.p0], t_eval=ts, method="DOP853", rtol=1e-12, atol=1e-13)
    return sol.y


class TestSteadyResponse:
    def test_amplitude_reference_point(self):
        r = steady_response(DDHOParams(1.0, 0.1, 2.0, 0.8))
        direct = 2.0 / math.sqrt((1 - 0.64) ** 2 + (2 * 0.1 * 0.8) ** 2)
        assert r.A2 == pytest.approx(direct, rel=1e-14)
        assert r.A2 == pytest.approx(5.0768, abs=1e-4)
        assert r.lag == pytest.approx(-math.atan2(0.16, 0.36))

    @settings(max_examples=60, deadline=None)
    @given(w0=st.floats(0.2, 3), g=st.floats(0.0, 1.5), F0=st.floats(0.1, 3), W=st.floats(0.05, 4),
           phi=st.floats(-math.pi, math.pi))
    def test_quadratures_solve_the_equation(self, w0, g, F0, W, phi):
        # x = X1 cos Wt + X2 sin Wt must satisfy x'' + 2g x' + w0^2 x = F0 cos(Wt + phi)
        if g == 0 and abs(W - w0) < 1e-3:
            return
        r = steady_response(DDHOParams(w0, g, F0, W, phi))
        t = np.linspace(0, 7, 13)
        x = r.X1 * np.cos(W * t) + r.X2 * np.sin(W * t)
        v = W * (-r.X1 * np.sin(W * t) + r.X2 * np.cos(W * t))
        acc = -W * W * x
        resid = acc + 2 * g * v + w0 * w0 * x - F0 * np.cos(W * t + phi)
        assert np.max(np.abs(resid)) < 1e-9 * max(1.0, F0 / max(abs(w0 ** 2 - W ** 2), 1e-3))
        np.testing.assert_allclose(r.A2 * np.cos(W * t + r.phi2), x, atol=1e-10 * max(1, r.A2))

    def test_undamped_resonance_is_unbounded(self):
        with pytest.raises(UnboundedResonanceError):
            steady_response(DDHOParams(1.0, 0.0, 1.0, 1.0))

    def test_undamped_lag_branches(self):
        assert steady_response(DDHOParams(1.0, 0.0, 1.0, 0.5)).lag == 0.0
        assert steady_response(DDHOParams(1.0, 0.0, 1.0, 2.0)).lag == -math.pi

    def test_in_phase_quadrature_changes_sign_at_natural_frequency(self):
        below = steady_response(DDHOParams(1.0, 0.1, 1.0, 0.999)).X1
        above = steady_response(DDHOParams(1.0, 0.1, 1.0, 1.001)).X1
        assert below > 0 > above
        assert steady_response(DDHOParams(1.0, 0.1, 1.0, 1.0)).X1 == 0.0

    def test_undamped_quadrature(self):
        r = steady_response(DDHOParams(1.0, 0.0, 0.6, 2.0, 0.3))
        assert r.X1 == pytest.approx(-0.6 * math.cos(0.3) / 3)


class TestResonance:
    def test_formula(self):
        assert resonant_frequency(1.0, 0.1) == pytest.approx(math.sqrt(0.98))

    def test_argmax_of_sweep(self):
        Ws = np.arange(0.5, 1.5, 1e-4)
        rows = response_sweep(1.0, 0.1, [2.0], Ws)
        W_best = rows[np.argmax(rows[:, 2]), 0]
        assert abs(W_best - math.sqrt(1 - 2 * 0.01)) <= 1e-4

    def test_no_interior_peak_when_heavily_damped(self):
        with pytest.raises(OverdampedError):
            resonant_frequency(1.0, 0.8)

    def test_sweep_layout(self):
        rows = response_sweep(1.0, 0.2, [1.0, 2.0], [0.5, 1.0, 1.5])
        assert rows.shape == (6, 6)
        np.testing.assert_array_equal(rows[:3, 1], 1.0)
        np.testing.assert_array_equal(rows[3:, 0], [0.5, 1.0, 1.5])
        np.testing.assert_allclose(rows[3:, 2], 2 * rows[:3, 2])


class TestSolution:
    @pytest.mark.parametrize("p", [
        DDHOParams(1.0, 0.1, 2.0, 0.8, 0.2, 1.0, -0.5),
        DDHOParams(1.3, 0.0, 0.5, 0.7, 0.0, 0.2, 0.3),
        DDHOParams(1.0, 1.0, 1.0, 0.5, 0.4, 0.5, 0.0),
        DDHOParams(1.0, 2.5, 1.0, 1.5, 0.0, -1.0, 2.0),
        DDHOParams(1.0, 0.0, 0.3, 1.0, 0.5, 0.1, 0.0),
    ], ids=["under", "undamped", "critical", "over", "resonant"])
    def test_matches_direct_integration(self, p):
        ts = np.linspace(0, 30, 301)
        x, v = ddho_solution(p, ts)
        ref = _reference(p, ts)
        np.testing.assert_allclose(x, ref[0], atol=1e-8)
        np.testing.assert_allclose(v, ref[1], atol=1e-8)

    def test_homogeneous_constants_reproduce_initial_state(self):
        p = DDHOParams(1.0, 0.2, 1.0, 0.8, 0.0, 0.7, -0.3)
        A1, phi1 = homogeneous_constants(p)
        w = p.damped_frequency
        ts = np.linspace(0, 5, 11)
        x, _ = ddho_solution(p, ts)
        r = steady_response(p)
        xh = A1 * np.exp(-p.gamma * ts) * np.cos(w * ts + phi1)
        np.testing.assert_allclose(xh + r.A2 * np.cos(p.Omega * ts + r.phi2), x, atol=1e-12)

    def test_parameter_validation(self):
        for bad in ({"omega0": 0.0}, {"gamma": -0.1}, {"Omega": -1.0}):
            with pytest.raises(ParameterError):
                DDHOParams(**bad)
        assert DDHOParams(2.0, 0.5).quality == 2.0
        with pytest.raises(OverdampedError):
            DDHOParams(1.0, 1.0).damped_frequency


class TestClassicalFlow:
    def test_caldirola_kanai_is_the_damped_oscillator(self):
        cs = caldirola_kanai(0.2, 0.2, 0.8)
        traj = integrate_classical(cs, 1.0, 0.0, 20.0, 0.01)
        assert np.max(np.abs(standard_form_residual(cs, traj))) < 1e-7
        # independent check: the closed-form damped solution with x'(0) = a(0) P(0)
        x, _ = ddho_solution(DDHOParams(1.0, 0.2, 0.2, 0.8, 0.0, 1.0, 0.0), traj.times)
        np.testing.assert_allclose(traj.X_c, x, atol=1e-7)

    def test_driven_undamped_centre(self):
        cs = caldirola_kanai(0.0, 0.2, 0.8)
        traj = integrate_classical(cs, 0.0, 0.0, 10.0, 0.01)
        t = traj.times
        exact = 0.2 / 0.36 * (np.cos(0.8 * t) - np.cos(t))
        np.testing.assert_allclose(traj.X_c, exact, atol=1e-7)
        # alpha'' + alpha = F via second differences of the dense-sampled orbit
        h = t[1] - t[0]
        acc = (traj.X_c[2:] - 2 * traj.X_c[1:-1] + traj.X_c[:-2]) / h ** 2
        F = 0.2 * np.cos(0.8 * t[1:-1])
        assert np.max(np.abs(acc + traj.X_c[1:-1] - F)) < 1e-4

    def test_action_of_free_oscillator_period(self):
        cs = caldirola_kanai(0.0)
        traj = integrate_classical(cs, 1.0, 0.0, 2 * math.pi, 2 * math.pi / 400)
        # L = (P^2 - X^2)/2 averages to zero over a period
        assert abs(traj.s[-1]) < 1e-8

    def test_parametric_residual(self):
        cs = parametric(M="1+0.3*sin(t)", omega0_sq="1+0.2*cos(2*t)", fc="0.1*cos(t)", horizon=20)
        traj = integrate_classical(cs, 0.5, 0.2, 20.0, 0.05)
        assert np.max(np.abs(standard_form_residual(cs, traj))) < 1e-7

    def test_zero_horizon_and_validation(self):
        cs = caldirola_kanai(0.1)
        traj = integrate_classical(cs, 1.0, 2.0, 0.0, 0.1)
        assert traj.times.tolist() == [0.0] and traj.P_c.tolist() == [2.0]
        with pytest.raises(ParameterError):
            integrate_classical(cs, 0, 0, -1.0, 0.1)
        with pytest.raises(ValueError):
            traj.X_c[0] = 3.0


class TestSpectrum:
    def test_peak_at_drive_frequency(self):
        dt = 0.05
        t = np.arange(8192) * dt
        x = 0.7 * np.cos(0.8 * t) + 0.1 * np.cos(2.3 * t)
        w, P = power_spectrum(x, dt)
        assert abs(w[np.argmax(P)] - 0.8) < 2 * math.pi / (t.size * dt)
        second = np.argmax(np.where(np.abs(w - 0.8) > 0.2, P, 0))
        assert abs(w[second] - 2.3) < 2 * math.pi / (t.size * dt)

    def test_times_argument_and_mean_removal(self):
        t = np.linspace(0, 100, 2001)
        w1, P1 = power_spectrum(3.0 + np.sin(t), t)
        w2, P2 = power_spectrum(np.sin(t), t[1] - t[0])
        np.testing.assert_allclose(P1, P2, atol=1e-12)
        _, P0 = power_spectrum(np.full(64, 2.5), 0.1)
        assert np.all(P0 == 0.0)

    def test_rejects_nonuniform(self):
        with pytest.raises(ParameterError):
            power_spectrum([1.0, 2.0, 3.0], [0.0, 1.0, 3.0])
        with pytest.raises(ParameterError):
            power_spectrum([1.0], 0.1)
