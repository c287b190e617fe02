import math

import numpy as np
import pytest
from scipy.integrate import quad

from lieosc.coeffs import CoefficientSet, caldirola_kanai, parametric
from lieosc.errors import DivergenceError, ParameterError, WellPoleWarning
from lieosc.flows import ermakov_solve, ks_from_rho
from lieosc.models import (FreeParticleSolution, InvariantOperator, KStrategy, PosmomSolution,
                           Scenario, WellSolution, accelerated_well_omega0, cumulative_integral,
                           free_particle_solution, initial_state, invariant_expectation,
                           posmom_solution, run_scenario, schrodinger_residual, well_solution)
from lieosc.quantum import Grid, hermite, l2_distance, number_overlap, posmom_function, well
from lieosc.quantum.fock import classical_energy, survival_probability

pytestmark = pytest.mark.filterwarnings("ignore::lieosc.errors.PhaseStepWarning")

G = Grid(-20.0, 20.0, 1024)


def _widths(res):
    return (np.array([m.delta_x for m in res.moments]), np.array([m.delta_p for m in res.moments]))


class TestScenarios:
    def test_zero_frame_truncates_before_the_pole(self):
        sc = Scenario("ck", caldirola_kanai(0.2, 0.2, 0.8), KStrategy("zero"), grid=G,
                      horizon=3.0, dt_output=0.05)
        res = run_scenario(sc)
        assert res.truncated
        pole = [e for e in res.events if e.parameter == "theta_plus"][0].time
        assert pole == pytest.approx(1.8087, abs=1e-3)
        assert res.times[-1] < pole
        np.testing.assert_allclose(res.norms, 1.0, atol=1e-8)

    def test_constant_frame_squeezes_position(self):
        sc = Scenario("ck", caldirola_kanai(0.2, 0.2, 0.8), KStrategy("constant", K=(1, 1, 0)), grid=G,
                      horizon=10.0, dt_output=0.1)
        res = run_scenario(sc)
        assert not res.events
        dx, dp = _widths(res)
        assert np.all(dx * dp >= 0.5 - 1e-12)
        assert dx[-1] < 0.2 * dx[0] and dp[-1] > 5 * dp[0]
        assert np.ptp(res.invariant) <= 1e-10 * abs(res.invariant[0])

    def test_tracked_frame_squeezes_both_quadratures(self):
        cs = parametric(M=1.0, omega0_sq="1+0.2*sin(2*t)", horizon=8.0)
        sc = Scenario("par", cs, KStrategy("tracked", K=(1, 1, 0)), grid=G, horizon=6.0,
                      dt_output=0.05)
        res = run_scenario(sc)
        dx, dp = _widths(res)
        assert (dx ** 2).min() < 0.5 and (dp ** 2).min() < 0.5
        assert np.argmin(dx) != np.argmin(dp)
        assert np.ptp(res.invariant) < 1e-6 * abs(res.invariant[0])

    def test_ermakov_fixed_point_invariant(self):
        Om = 2.0
        cs = caldirola_kanai(0.0)
        aux = ermakov_solve(cs, math.sqrt(Om), 0.0, Om, 5.0)
        ks = ks_from_rho(aux, cs, Om)
        inv = InvariantOperator.from_ks((ks.K1(1.0), ks.K2(1.0), ks.K3(1.0)))
        for n in range(4):
            assert invariant_expectation(inv, hermite(G, n)) == pytest.approx(Om * (n + 0.5), rel=1e-10)

    def test_ermakov_frame_conserves_invariant(self):
        cs = parametric(M=1.0, omega0_sq="1+0.2*sin(2*t)", horizon=6.0)
        sc = Scenario("erm", cs, KStrategy("ermakov", Omega=1.0), grid=G, horizon=6.0, dt_output=0.1)
        res = run_scenario(sc)
        assert res.invariant[0] == pytest.approx(0.5, rel=1e-12)
        assert np.ptp(res.invariant) < 1e-6 * res.invariant[0]

    def test_displaced_state_survival(self):
        # constant frame on the undamped oscillator: U is a pure displacement
        cs = caldirola_kanai(0.0, 0.6, 0.8)
        period = 2 * math.pi / 0.8
        for n in range(4):
            sc = Scenario("ho", cs, KStrategy("constant", K=(1, 1, 0)), {"kind": "hermite", "n": n},
                          grid=G, horizon=period, dt_output=period / 16)
            res = run_scenario(sc)
            for i, t in enumerate(res.times):
                Ec = classical_energy(res.alpha[i], res.beta[i])
                pop = abs(number_overlap(res.states[i], n)) ** 2
                assert pop == pytest.approx(survival_probability(n, Ec), abs=1e-10)

    def test_superposition_and_determinism(self):
        spec = {"superposition": [[1, 0, {"kind": "hermite", "n": 0}], [0, 1, {"kind": "hermite", "n": 1}]]}
        psi = initial_state(spec, G)
        assert psi.norm() == pytest.approx(1.0)
        ref = (hermite(G, 0).psi + 1j * hermite(G, 1).psi) / math.sqrt(2)
        np.testing.assert_allclose(psi.psi, ref, atol=1e-14)
        sc = Scenario("sup", caldirola_kanai(0.1, 0.2, 0.8), KStrategy("constant", K=(1, 1, 0)), spec,
                      grid=G, horizon=2.0, dt_output=0.5)
        a, b = run_scenario(sc), run_scenario(sc)
        for sa, sb in zip(a.states, b.states):
            assert np.array_equal(sa.psi, sb.psi)

    def test_validation(self):
        cs = caldirola_kanai(0.1)
        with pytest.raises(ParameterError):
            KStrategy("diagonal")
        with pytest.raises(ParameterError):
            KStrategy("constant", K=(1, 1))
        with pytest.raises(ParameterError):
            Scenario("x", cs, KStrategy("constant", K=(1, -1, 0))).validate()
        with pytest.raises(ParameterError):
            Scenario("x", CoefficientSet.from_values(a=1, b=-1), KStrategy("constant", K=(1, 1, 0))).validate()
        with pytest.raises(ParameterError):
            Scenario("x", cs, KStrategy("tracked", K=(1, 1, 0)), dt_output=0.1, dt_propagate=0.03).validate()
        with pytest.raises(ParameterError):
            initial_state({"superposition": []}, G)

    def test_cumulative_integral(self):
        from lieosc.coeffs import Harmonic
        vals = cumulative_integral(Harmonic(1.0, 2.0), [0.0, 0.5, 1.3])
        np.testing.assert_allclose(vals, np.sin(2 * np.array([0.0, 0.5, 1.3])) / 2, atol=1e-12)


def _sin_mode_overlap(n, dL_L):
    # |<sin mode|Psi_n>|^2 on the current well: only the chirp exp(i L' L u^2 / 2) separates them
    re = quad(lambda u: 2 * math.sin(n * math.pi * u) ** 2 * math.cos(0.5 * dL_L * u * u), 0, 1, limit=200)[0]
    im = quad(lambda u: 2 * math.sin(n * math.pi * u) ** 2 * math.sin(0.5 * dL_L * u * u), 0, 1, limit=200)[0]
    return re * re + im * im


class TestWell:
    g = Grid(-0.5, 3.5, 4096)

    def test_static_well_is_stationary(self):
        sol = WellSolution(1.0, horizon=2.0)
        psi0 = sol(1, 0.0, self.g.x)
        psi = sol(1, 1.5, self.g.x)
        np.testing.assert_allclose(psi, psi0 * np.exp(-0.5j * math.pi ** 2 * 1.5), atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2])
    def test_expanding_well_norm_and_overlap(self, n):
        sol = WellSolution("1+0.1*t", horizon=10.0)
        for t in (0.0, 2.5, 5.0, 10.0):
            st_ = sol.state(n, t, self.g)
            assert st_.norm() == pytest.approx(1.0, abs=2e-3)
            L = 1 + 0.1 * t
            ov = abs(sol.instantaneous_eigenstate(n, t, self.g).inner(st_)) ** 2
            assert ov == pytest.approx(_sin_mode_overlap(n, 0.1 * L), abs=2e-3)
            inv = abs(sol.invariant_eigenstate(n, t, self.g).inner(st_)) ** 2 / st_.norm() ** 2
            assert inv == pytest.approx(1.0, abs=1e-12)

    def test_constant_speed_closed_form(self):
        v, n, t = 0.3, 1, 2.0
        L = 1 + v * t
        x = np.linspace(0.05, L - 0.05, 9)
        psi = WellSolution(f"1+{v}*t", horizon=t)(n, t, x)
        # chirp exp(i v x^2/(2L)) on the instantaneous mode, phase from the integral of L^-2 = t/L
        ref = np.exp(0.5j * v * x * x / L) * math.sqrt(2 / L) * np.sin(n * math.pi * x / L) \
            * np.exp(-0.5j * (n * math.pi) ** 2 * t / L)
        np.testing.assert_allclose(psi, ref, atol=1e-12)

    @pytest.mark.parametrize("v", [0.01, 0.1, 1.0])
    def test_invariant_value(self, v):
        t = 1.0
        sol = WellSolution(f"1+{v}*t", horizon=t)
        for n in (1, 2):
            st_ = sol.state(n, t, self.g)
            val = invariant_expectation(sol.invariant(t), st_, derivative="fd") / st_.norm()
            assert val == pytest.approx((n * math.pi) ** 2 / 2, rel=1e-3)

    def test_schrodinger_residual_inside_the_well(self):
        with pytest.warns(WellPoleWarning):
            sol = WellSolution("1+0.1*sin(3*t)", "0.02*cos(t)", horizon=3.0)
        L, a = 1 + 0.1 * math.sin(3 * 1.2), sol.h4.at(1.2).alpha
        x = np.linspace(a + 0.1, a + L - 0.1, 15)
        r, psi = schrodinger_residual(sol.cs, lambda tt, xx: sol(2, tt, xx), 1.2, x)
        assert np.max(np.abs(r)) < 1e-5

    def test_accelerated_frequency(self):
        with pytest.raises(DivergenceError):
            accelerated_well_omega0("1+0.1*t^2", 0.0)
        # L = 0.8 and L'' = 0.2 at t = 1
        L, ddL = 0.8, 0.2
        w = accelerated_well_omega0("1-0.3*t+0.1*t^2", 1.0)
        assert w == pytest.approx(math.sqrt(ddL / L / (1 - L ** 4)) * L * L, rel=1e-12)
        with pytest.raises(ParameterError):
            accelerated_well_omega0("1+0.1*t^2", 1.0)
        with pytest.raises(ParameterError):
            accelerated_well_omega0("1-0.1*t", 20.0)
        with pytest.warns(WellPoleWarning):
            WellSolution("1+0.1*t^2", horizon=1.0)

    def test_rejects_collapsed_width(self):
        sol = WellSolution("1-0.1*t", horizon=5.0)
        with pytest.raises(ParameterError):
            sol(1, 12.0, [0.5])

    def test_helper(self):
        st_ = well_solution(1.0, 1, t=0.0, grid=self.g)
        assert l2_distance(st_, well(self.g, 1)) < 1e-3
        moving = well_solution("1+0.1*t", 1, t=0.0, grid=self.g)
        # the expanding wall already carries the chirp exp(i 0.1 x^2 / 2) at t = 0
        np.testing.assert_allclose(moving.psi, st_.psi * np.exp(0.05j * self.g.x ** 2), atol=1e-14)


class TestPosmom:
    def test_zero_hamiltonian_leaves_eigenfunction_unchanged(self):
        # the frame dilation and the frame phase exp(-i xi t) cancel when H = 0
        cs = CoefficientSet.from_values()
        x = np.linspace(0.5, 4, 8)
        psi = posmom_solution(cs, 1.0, 0.5, 1.0, 2.0, x)
        np.testing.assert_allclose(psi, posmom_function(x, 0.5), atol=1e-14)
        np.testing.assert_allclose(posmom_solution(cs, 1.0, 0.5, 1.0, 0.0, x), posmom_function(x, 0.5))

    def test_rejects_nonpositive_positions(self):
        cs = caldirola_kanai(0.1, 1.0, 2.0)
        with pytest.raises(ParameterError):
            posmom_solution(cs, 1.0, 0.5, 1.0, 0.5, [0.0, 1.0])
        with pytest.raises(ParameterError):
            PosmomSolution(cs, X0=-1.0)

    def test_schrodinger_residual(self):
        cs = caldirola_kanai(0.1, 0.2, 2.0)
        sol = PosmomSolution(cs, 1.0, 0.5, 1.0, horizon=1.5)
        x = np.linspace(1.0, 3.0, 9)
        r, psi = schrodinger_residual(cs, sol, 0.7, x)
        assert np.max(np.abs(r)) < 1e-4 * max(1.0, np.max(np.abs(psi)))

    def test_divergence_is_reported(self):
        sol = PosmomSolution(caldirola_kanai(0.1), 1.0, 0.5, horizon=5.0)
        assert sol.valid_until < 5.0
        with pytest.raises(DivergenceError):
            sol(4.9, [1.0])


class TestFreeParticle:
    def test_undamped_pole(self):
        sol = FreeParticleSolution(caldirola_kanai(0.0), 0.5, horizon=3.0)
        assert sol.pole == pytest.approx(math.pi / 2, abs=1e-6)
        with pytest.raises(DivergenceError):
            sol(1.6, [0.0])

    def test_residual_before_the_pole(self):
        cs = caldirola_kanai(0.1, 0.2, 0.8)
        sol = FreeParticleSolution(cs, 0.5, horizon=2.0)
        x = np.linspace(-2, 2, 21)
        for t in np.linspace(0.1, 0.8 * sol.pole, 6):
            r, _ = schrodinger_residual(cs, sol, t, x)
            assert np.max(np.abs(r)) < 1e-5

    def test_zero_energy_has_no_plane_factor(self):
        cs = caldirola_kanai(0.0)
        psi = free_particle_solution(cs, None, 0.0, 0.7, np.linspace(-1, 1, 5))
        # rho = cos t: amplitude cos(t)^-1/2, chirp tan(t) x^2 / 2
        x = np.linspace(-1, 1, 5)
        ref = np.exp(-0.5j * math.tan(0.7) * x * x) / math.sqrt(2 * math.pi * math.cos(0.7))
        np.testing.assert_allclose(np.abs(psi), np.abs(ref), rtol=1e-8)
        np.testing.assert_allclose(psi / psi[2], ref / ref[2], rtol=1e-7)

    def test_negative_energy_rejected(self):
        with pytest.raises(ParameterError):
            FreeParticleSolution(caldirola_kanai(0.0), -1.0)
