"""Subcommand implementations.  Each returns an exit code and writes into ``out``."""

from __future__ import annotations

import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..classical import (DDHOParams, ddho_solution, integrate_classical, power_spectrum,
                         resonant_frequency, response_sweep, standard_form_residual,
                         steady_response)
from ..coeffs.coefficients import sample
from ..errors import ConfigError, LieoscError, OverdampedError, UnboundedResonanceError
from ..flows import bracket_divergence, complex_su2, divergence_times, evolve_h4
from ..models import initial_state, run_scenario, scenario_flows
from ..quantum import direct_propagate, l2_distance
from .config import ScenarioConfig, expand_values
from .writers import write_csv, write_gnuplot, write_json, write_pgm

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

T_UNIT = "1/omega0"
X_UNIT = "x_zpf"
P_UNIT = "p_zpf"
E_UNIT = "hbar omega0"


@dataclass
class Options:
    out: Path
    jobs: int = 1
    oracle: bool = False
    strict: bool = False
    pgm: bool = False


def _say(msg: str) -> None:
    print(msg, file=sys.stdout)


def _events_payload(events) -> list:
    return [ev.to_dict() for ev in events]


# ------------------------------------------------------------------ classical

def cmd_classical(cfg: ScenarioConfig, opt: Options) -> int:
    if cfg.horizon <= 0:
        raise ConfigError("classical runs need a positive horizon", "horizon")
    section = cfg.classical or {}
    cases = section.get("cases", [])
    response = section.get("response")
    step = float(section.get("step", cfg.dt_output))
    opt.out.mkdir(parents=True, exist_ok=True)
    n = int(math.floor(cfg.horizon / step + 1e-9)) + 1
    ts = np.arange(n) * step
    summary = {"cases": []}
    plots_x, plots_ph, plots_sp = [], [], []
    for i, case in enumerate(cases):
        p = DDHOParams(**case)
        x, v = ddho_solution(p, ts)
        tag = f"{i:02d}"
        write_csv(opt.out / f"trajectory_{tag}.csv", ["t", "x", "v"], [T_UNIT, X_UNIT, "x_zpf omega0"],
                  np.column_stack([ts, x, v]))
        freqs, power = power_spectrum(x, step)
        write_csv(opt.out / f"spectrum_{tag}.csv", ["omega", "power"], ["omega0", "x_zpf^2/omega0"],
                  np.column_stack([freqs, power]))
        plots_x.append(f"'trajectory_{tag}.csv' using 1:2 with lines title 'case {tag}'")
        plots_ph.append(f"'trajectory_{tag}.csv' using 2:3 with lines title 'case {tag}'")
        plots_sp.append(f"'spectrum_{tag}.csv' using 1:2 with lines title 'case {tag}'")
        entry = {"params": dict(case)}
        try:
            r = steady_response(p)
            entry.update(A2=r.A2, phi2=r.phi2, X1=r.X1, X2=r.X2, lag=r.lag,
                         E_steady_mean=0.25 * r.A2 ** 2 * (1.0 + p.Omega ** 2))
        except UnboundedResonanceError:
            entry["steady"] = "none (undamped resonance)"
        try:
            entry["resonant_frequency"] = resonant_frequency(p.omega0, p.gamma)
        except (OverdampedError, LieoscError):
            entry["resonant_frequency"] = None
        summary["cases"].append(entry)
    if plots_x:
        write_gnuplot(opt.out / "trajectory.gp", "trajectories", plots_x, "t", "x")
        write_gnuplot(opt.out / "phase.gp", "phase portrait", plots_ph, "x", "dx/dt")
        write_gnuplot(opt.out / "spectrum.gp", "power spectrum", plots_sp, "omega", "power",
                      "set logscale y")
    if response is not None:
        F0s = expand_values(response["F0"])
        Ws = expand_values(response["Omega"])
        rows = response_sweep(float(response.get("omega0", 1.0)), float(response.get("gamma", 0.1)),
                              F0s, Ws, float(response.get("phi", 0.0)))
        write_csv(opt.out / "response.csv", ["omega", "F0", "A2", "phi2", "X1", "X2"],
                  ["omega0", "x_zpf omega0^2", X_UNIT, "rad", X_UNIT, X_UNIT], rows)
        plots = [f"'response.csv' every ::{j * len(Ws)}::{(j + 1) * len(Ws) - 1} using 1:3 "
                 f"with lines title 'F0={F0:g}'" for j, F0 in enumerate(F0s)]
        write_gnuplot(opt.out / "response.gp", "steady amplitude", plots, "Omega", "A2")
    # the scenario's own centre motion, so coefficient configs work here too
    traj = integrate_classical(cfg.coefficient_set(), cfg.center[0], cfg.center[1], cfg.horizon, step)
    write_csv(opt.out / "classical.csv", ["t", "x", "p", "s"], [T_UNIT, X_UNIT, P_UNIT, "hbar"],
              np.column_stack([traj.times, traj.X_c, traj.P_c, traj.s]))
    summary["standard_form_residual"] = float(np.max(np.abs(standard_form_residual(cfg.coefficient_set(), traj))))
    write_json(opt.out / "summary.json", summary)
    _say(f"classical: {len(cases)} case(s) written to {opt.out}")
    return EXIT_OK


# --------------------------------------------------------------------- params

def _theta_columns(times, tp, t0, tm):
    return np.column_stack([times, np.real(tp), np.imag(tp), np.real(t0), np.imag(t0),
                            np.real(tm), np.imag(tm)])


THETA_COLS = ["t", "re_theta_plus", "im_theta_plus", "re_theta0", "im_theta0",
              "re_theta_minus", "im_theta_minus"]
THETA_UNITS = [T_UNIT] + ["1"] * 6


def _write_parameter_files(out: Path, cfg: ScenarioConfig, times, h4, tp, t0, tm, K, events,
                           header_only: bool) -> None:
    cs = cfg.coefficient_set()
    sel = slice(0, 0) if header_only else slice(None)
    ts = times[sel]
    vals = sample(cs, ts) if ts.size else np.zeros((6, 0))
    write_csv(out / "params.csv", ["t", "a", "b", "c", "d", "e", "f"], [T_UNIT] + [E_UNIT] * 6,
              np.column_stack([ts, np.asarray(vals).T]) if ts.size else [])
    write_csv(out / "classical.csv", ["t", "x", "p", "s"], [T_UNIT, X_UNIT, P_UNIT, "hbar"],
              np.column_stack([ts, h4[0][sel], -np.asarray(h4[1])[sel], h4[2][sel]]) if ts.size else [])
    write_csv(out / "theta.csv", THETA_COLS, THETA_UNITS,
              _theta_columns(ts, tp[sel], t0[sel], tm[sel]) if ts.size else [])
    write_csv(out / "K.csv", ["t", "K1", "K2", "K3"], [T_UNIT, E_UNIT, E_UNIT, E_UNIT],
              np.column_stack([ts, np.asarray(K)[:, sel].T]) if ts.size else [])
    write_json(out / "events.json", {"events": _events_payload(events)})
    write_json(out / "config.json", cfg.to_dict())
    write_gnuplot(out / "theta.gp", "transformation parameters",
                  [f"'theta.csv' using 1:{j} with lines" for j in range(2, 8)], "t", "theta")
    write_gnuplot(out / "classical.gp", "classical centre",
                  ["'classical.csv' using 1:2 with lines", "'classical.csv' using 1:3 with lines"],
                  "t", "x, p")


def cmd_params(cfg: ScenarioConfig, opt: Options) -> int:
    sc = cfg.scenario()
    opt.out.mkdir(parents=True, exist_ok=True)
    times = sc.output_times()
    header_only = cfg.horizon == 0
    if cfg.theta_route == "complex":
        if sc.k_strategy.kind != "zero":
            raise ConfigError("the complex route is defined for the zero K frame only", "theta_route")
        if header_only:
            su2 = None
            events = []
            h4 = (np.zeros(1), np.zeros(1), np.zeros(1))
            tp = t0 = tm = np.zeros(1, complex)
        else:
            su2, _ = complex_su2(sc.coefficients, horizon=cfg.horizon, t_eval=times)
            events = list(su2.events)
            times = su2.t
            traj = evolve_h4(sc.coefficients, _h4_init(sc), cfg.horizon, t_eval=times)
            h4 = (traj.alpha, traj.beta, traj.s)
            tp, t0, tm = su2.theta_plus, su2.theta0, su2.theta_minus
        K = np.zeros((3, times.size))
    else:
        flows = _flows(sc, times, header_only)
        times, events = flows.times, flows.events
        n = times.size
        h4 = (flows.h4.alpha[:n], flows.h4.beta[:n], flows.h4.s[:n])
        tp, t0, tm = flows.su2.theta_plus, flows.su2.theta0, flows.su2.theta_minus
        K = np.array([[float(k(t)) for t in times] for k in
                      (flows.kset.K1, flows.kset.K2, flows.kset.K3)]).reshape(3, n)
    _write_parameter_files(opt.out, cfg, times, h4, tp, t0, tm, K, events, header_only)
    _say(f"params: {0 if header_only else times.size} samples, {len(events)} event(s) written to {opt.out}")
    for ev in events:
        _say(f"  event: t={ev.time:.10g} {ev.parameter} {ev.kind}")
    return EXIT_NUMERIC if (opt.strict and events) else EXIT_OK


def _h4_init(sc):
    from ..flows import H4State

    return H4State(sc.center[0], -sc.center[1], 0.0)


def _flows(sc, times, header_only):
    if header_only:
        # integrators need a positive span; the zero-horizon bundle is header-only anyway
        return scenario_flows(sc, np.array([0.0]))
    return scenario_flows(sc, times)


# --------------------------------------------------------------------- evolve

def cmd_evolve(cfg: ScenarioConfig, opt: Options) -> int:
    sc = cfg.scenario()
    opt.out.mkdir(parents=True, exist_ok=True)
    header_only = cfg.horizon == 0
    res = run_scenario(sc)
    times = res.times
    h4 = (res.alpha, res.beta, res.s)
    _write_parameter_files(opt.out, cfg, times, h4, res.theta_plus, res.theta0, res.theta_minus,
                           res.K, res.events, header_only)
    x = np.asarray(sc.grid.x)
    nt = 0 if header_only else len(res.states)
    dens = res.densities[:nt] if nt else np.zeros((0, x.size))
    rows = np.column_stack([np.repeat(times[:nt], x.size), np.tile(x, nt), dens.reshape(-1)]) if nt else []
    write_csv(opt.out / "density.csv", ["t", "x", "density"], [T_UNIT, X_UNIT, "1/x_zpf"], rows)
    m = res.moments[:nt]
    mrows = [(t, mm.mean_x, mm.mean_p, mm.delta_x, mm.delta_p, mm.norm, inv)
             for t, mm, inv in zip(times, m, res.invariant)]
    write_csv(opt.out / "moments.csv", ["t", "mean_x", "mean_p", "delta_x", "delta_p", "norm", "invariant"],
              [T_UNIT, X_UNIT, P_UNIT, X_UNIT, P_UNIT, "1", E_UNIT], mrows)
    write_gnuplot(opt.out / "density.gp", "probability density",
                  ["'density.csv' using 1:2:3 with image"], "t", "x")
    write_gnuplot(opt.out / "moments.gp", "uncertainties",
                  ["'moments.csv' using 1:4 with lines", "'moments.csv' using 1:5 with lines"],
                  "t", "width")
    if opt.pgm and nt:
        # time runs down the rows, x across
        write_pgm(opt.out / "density.pgm", dens)
    code = EXIT_OK
    _say(f"evolve: {nt} snapshot(s), {len(res.events)} event(s) written to {opt.out}")
    for ev in res.events:
        _say(f"  event: t={ev.time:.10g} {ev.parameter} {ev.kind}")
    if opt.strict and res.events:
        code = EXIT_NUMERIC
    if opt.oracle and nt:
        err = oracle_errors(sc, res)
        write_csv(opt.out / "oracle.csv", ["t", "l2_error"], [T_UNIT, "1"], np.column_stack([times[:nt], err]))
        worst = float(np.max(err))
        _say(f"oracle: max L2 distance {worst:.3e} (tolerance {cfg.tolerance:g})")
        if opt.strict and not worst < cfg.tolerance:
            code = EXIT_NUMERIC
    return code


def oracle_errors(sc, res) -> np.ndarray:
    """L2 distance between the reconstruction and split-step propagation at each output time."""
    psi0 = initial_state(sc.initial, sc.grid)
    times = res.times
    run = direct_propagate(sc.coefficients, psi0, float(times[-1]), sc.dt_propagate, t_out=times)
    return np.array([l2_distance(a, b) for a, b in zip(res.states, run.states)])


# ---------------------------------------------------------------------- sweep

def _sweep_job(args):
    raw, command, out, flags = args
    cfg = ScenarioConfig.from_dict(raw)
    o = Options(Path(out), 1, *flags)
    try:
        return COMMANDS[command](cfg, o), ""
    except LieoscError as exc:
        return (EXIT_CONFIG if isinstance(exc, ConfigError) else EXIT_NUMERIC), str(exc)


def cmd_sweep(cfg: ScenarioConfig, opt: Options) -> int:
    if not cfg.sweep:
        raise ConfigError("sweep command needs a sweep section", "sweep")
    command = cfg.sweep.get("command", "params")
    keys = list(cfg.sweep["vary"])
    combos = list(itertools.product(*(cfg.sweep["vary"][k] for k in keys)))
    opt.out.mkdir(parents=True, exist_ok=True)
    jobs = []
    index = []
    for j, combo in enumerate(combos):
        sub = cfg
        for k, v in zip(keys, combo):
            sub = sub.with_override(k, v)
        job_out = opt.out / f"job_{j:04d}"
        jobs.append((sub.to_dict(), command, str(job_out), (opt.oracle, opt.strict, opt.pgm)))
        index.append({"job": job_out.name, "values": dict(zip(keys, combo))})
    if opt.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=opt.jobs) as pool:
            results = list(pool.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(j) for j in jobs]
    worst = EXIT_OK
    for entry, (code, msg) in zip(index, results):
        entry["exit_code"] = code
        if msg:
            entry["error"] = msg
        worst = max(worst, code)
    write_json(opt.out / "index.json", {"command": command, "jobs": index})
    _say(f"sweep: {len(jobs)} job(s) of '{command}' written to {opt.out}")
    failed = [e for e in index if e["exit_code"]]
    for e in failed:
        _say(f"  {e['job']}: exit {e['exit_code']} {e.get('error', '')}".rstrip())
    if failed and (opt.strict or any(e["exit_code"] == EXIT_CONFIG for e in failed)):
        return worst
    return EXIT_OK


# --------------------------------------------------------------------- verify

def _builtin_checks():
    """Fast self-checks that need no grid."""
    out = []
    r = steady_response(DDHOParams(1.0, 0.1, 2.0, 0.8))
    out.append(("steady amplitude A2(1, 0.1, 2, 0.8)", abs(r.A2 - 5.0767308) < 1e-6, f"{r.A2:.10g}"))
    root = bracket_divergence(0.1, 0)
    t_closed = divergence_times(0.1, count=1)[0]
    out.append(("first Caldirola-Kanai pole", abs(root - t_closed) < 1e-9, f"{root:.10g}"))
    from ..coeffs import caldirola_kanai
    from ..flows import evolve_su2

    su2 = evolve_su2(caldirola_kanai(0.1), horizon=3.0)
    t_flow = su2.first_divergence
    ok = t_flow is not None and abs(t_flow - root) < 1e-3
    out.append(("theta_plus blow-up vs root", ok, f"{t_flow}"))
    w = resonant_frequency(1.0, 0.1)
    out.append(("resonant frequency", abs(w - math.sqrt(0.98)) < 1e-12, f"{w:.12g}"))
    return out


def cmd_verify(cfg: ScenarioConfig | None, opt: Options) -> int:
    checks = _builtin_checks()
    if cfg is not None:
        sc = cfg.scenario()
        traj = integrate_classical(sc.coefficients, sc.center[0], sc.center[1],
                                   max(cfg.horizon, cfg.dt_output), cfg.dt_output)
        res_cl = float(np.max(np.abs(standard_form_residual(sc.coefficients, traj))))
        checks.append(("classical standard-form residual", res_cl < 1e-6, f"{res_cl:.3e}"))
        if cfg.horizon > 0:
            res = run_scenario(sc)
            if res.times.size:
                err = float(np.max(oracle_errors(sc, res)))
                checks.append((f"oracle L2 distance < {cfg.tolerance:g}", err < cfg.tolerance, f"{err:.3e}"))
                norms = res.norms
                dn = float(np.max(np.abs(norms - norms[0])))
                checks.append(("norm conservation < 1e-8", dn < 1e-8, f"{dn:.3e}"))
            checks.append(("no divergence events", not res.events, f"{len(res.events)}"))
    failed = False
    for name, ok, detail in checks:
        _say(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failed |= not ok
    if opt.out is not None:
        opt.out.mkdir(parents=True, exist_ok=True)
        write_json(opt.out / "verify.json",
                   {"checks": [{"name": n, "pass": bool(ok), "value": d} for n, ok, d in checks]})
    return EXIT_NUMERIC if (failed and opt.strict) else EXIT_OK


COMMANDS = {
    "classical": cmd_classical,
    "evolve": cmd_evolve,
    "params": cmd_params,
    "sweep": cmd_sweep,
}
