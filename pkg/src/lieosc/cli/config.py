"""JSON scenario configuration: strict schema, defaults and lossless round trip."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from ..classical import DDHOParams
from ..coeffs import NAMES, PRESETS, CoefficientSet, harmonic_oscillator, preset, time_function
from ..errors import ConfigError, LieoscError
from ..models import K_KINDS, KStrategy, Scenario, initial_state
from ..quantum import Grid

MODELS = ("custom",) + tuple(sorted(PRESETS))
ROUTES = ("real", "complex")
SWEEP_COMMANDS = ("evolve", "params")

_GRID_KEYS = {"x_min", "x_max", "N"}
_K_KEYS = {"kind", "K", "Kt", "Omega", "rho0", "rhodot0"}
_CLASSICAL_KEYS = {"cases", "step", "response"}
_CASE_KEYS = {f.name for f in fields(DDHOParams)}
_RESPONSE_KEYS = {"omega0", "gamma", "phi", "F0", "Omega"}
_RANGE_KEYS = {"start", "stop", "num"}
_SWEEP_KEYS = {"command", "vary"}


def _reject_unknown(obj: dict, allowed, path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key (allowed: {', '.join(sorted(allowed))})",
                              f"{path}.{key}" if path else key)


def _need_dict(obj, path):
    if not isinstance(obj, dict):
        raise ConfigError("expected an object", path)
    return obj


def _number(obj, path, positive=False, nonneg=False) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError("expected a number", path)
    v = float(obj)
    if not math.isfinite(v):
        raise ConfigError("must be finite", path)
    if positive and not v > 0:
        raise ConfigError("must be positive", path)
    if nonneg and v < 0:
        raise ConfigError("must be non-negative", path)
    return v


def _values(obj, path) -> list:
    """A list of numbers or a {"start", "stop", "num"} linear range."""
    if isinstance(obj, dict):
        _reject_unknown(obj, _RANGE_KEYS, path)
        for k in _RANGE_KEYS:
            if k not in obj:
                raise ConfigError("missing key", f"{path}.{k}")
        num = obj["num"]
        if isinstance(num, bool) or not isinstance(num, int) or num < 1:
            raise ConfigError("expected a positive integer", f"{path}.num")
        _number(obj["start"], f"{path}.start")
        _number(obj["stop"], f"{path}.stop")
        return obj
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return [float(obj)]
    if not isinstance(obj, list) or not obj:
        raise ConfigError("expected a non-empty list or a range object", path)
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(obj)]


def expand_values(v) -> list[float]:
    import numpy as np

    if isinstance(v, dict):
        return [float(x) for x in np.linspace(v["start"], v["stop"], v["num"])]
    return [float(x) for x in v]


@dataclass
class ScenarioConfig:
    """One self-describing run description.

    Every field has a default, so ``{}`` is a valid (free oscillator) config.
    Time-function fields accept a number, an expression string in ``t`` or a
    ``{"kind": ...}`` object.
    """

    name: str = "scenario"
    model: str = "custom"
    params: dict = field(default_factory=dict)
    coefficients: dict = field(default_factory=dict)
    k_strategy: dict = field(default_factory=lambda: {"kind": "zero"})
    initial: dict = field(default_factory=lambda: {"kind": "hermite", "n": 0})
    center: list = field(default_factory=lambda: [0.0, 0.0])
    grid: dict = field(default_factory=lambda: {"x_min": -20.0, "x_max": 20.0, "N": 1024})
    horizon: float = 10.0
    dt_output: float = 0.1
    dt_propagate: float = 1e-3
    reference: list = field(default_factory=lambda: [1.0, 1.0, 0.0])
    theta_route: str = "real"
    tolerance: float = 1e-6
    output: str | None = None
    classical: dict | None = None
    sweep: dict | None = None

    # ------------------------------------------------------------ parsing
    @classmethod
    def from_dict(cls, raw) -> "ScenarioConfig":
        raw = copy.deepcopy(_need_dict(raw, "<root>"))
        _reject_unknown(raw, {f.name for f in fields(cls)}, "")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                              str(path)) from None
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        return copy.deepcopy({f.name: getattr(self, f.name) for f in fields(self)})

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    # ---------------------------------------------------------- validation
    def validate(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ConfigError("expected a non-empty string", "name")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model; choose from {', '.join(MODELS)}", "model")
        _need_dict(self.params, "params")
        if self.model == "custom" and self.params:
            raise ConfigError("custom model takes coefficients, not params", "params")
        _need_dict(self.coefficients, "coefficients")
        _reject_unknown(self.coefficients, set(NAMES), "coefficients")
        for k, v in self.coefficients.items():
            self._check_time_function(v, f"coefficients.{k}")
        self._check_k()
        _need_dict(self.initial, "initial")
        if not isinstance(self.center, list) or len(self.center) != 2:
            raise ConfigError("expected [x0, p0]", "center")
        self.center = [_number(v, f"center[{i}]") for i, v in enumerate(self.center)]
        _need_dict(self.grid, "grid")
        _reject_unknown(self.grid, _GRID_KEYS, "grid")
        self.horizon = _number(self.horizon, "horizon", nonneg=True)
        self.dt_output = _number(self.dt_output, "dt_output", positive=True)
        self.dt_propagate = _number(self.dt_propagate, "dt_propagate", positive=True)
        self.tolerance = _number(self.tolerance, "tolerance", positive=True)
        if not isinstance(self.reference, list) or len(self.reference) != 3:
            raise ConfigError("expected three numbers", "reference")
        self.reference = [_number(v, f"reference[{i}]") for i, v in enumerate(self.reference)]
        if self.theta_route not in ROUTES:
            raise ConfigError(f"expected one of {', '.join(ROUTES)}", "theta_route")
        if self.output is not None and not isinstance(self.output, str):
            raise ConfigError("expected a string", "output")
        if self.classical is not None:
            self._check_classical()
        if self.sweep is not None:
            self._check_sweep()
        # build once so that physics-level errors surface with a key path
        self.coefficient_set()
        grid = self.make_grid()
        self.k_object()
        try:
            initial_state(self.initial, grid)
        except (LieoscError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc), "initial") from None

    def _check_time_function(self, v, path):
        try:
            time_function(v)
        except (LieoscError, TypeError) as exc:
            raise ConfigError(str(exc), path) from None

    def _check_k(self):
        ks = _need_dict(self.k_strategy, "k_strategy")
        _reject_unknown(ks, _K_KEYS, "k_strategy")
        kind = ks.get("kind", "zero")
        if kind not in K_KINDS:
            raise ConfigError(f"unknown kind; choose from {', '.join(K_KINDS)}", "k_strategy.kind")
        if "K" in ks:
            if not isinstance(ks["K"], list) or len(ks["K"]) != 3:
                raise ConfigError("expected [K1, K2, K3]", "k_strategy.K")
            ks["K"] = [_number(v, f"k_strategy.K[{i}]") for i, v in enumerate(ks["K"])]
        elif kind in ("constant", "tracked"):
            raise ConfigError("required for this kind", "k_strategy.K")
        if "Kt" in ks:
            self._check_time_function(ks["Kt"], "k_strategy.Kt")
        for key in ("Omega", "rho0", "rhodot0"):
            if key in ks:
                _number(ks[key], f"k_strategy.{key}")

    def _check_classical(self):
        c = _need_dict(self.classical, "classical")
        _reject_unknown(c, _CLASSICAL_KEYS, "classical")
        cases = c.get("cases", [])
        if not isinstance(cases, list):
            raise ConfigError("expected a list", "classical.cases")
        for i, case in enumerate(cases):
            path = f"classical.cases[{i}]"
            _reject_unknown(_need_dict(case, path), _CASE_KEYS, path)
            for k, v in case.items():
                _number(v, f"{path}.{k}")
            try:
                DDHOParams(**case)
            except LieoscError as exc:
                raise ConfigError(str(exc), path) from None
        if "step" in c:
            _number(c["step"], "classical.step", positive=True)
        if "response" in c:
            r = _need_dict(c["response"], "classical.response")
            _reject_unknown(r, _RESPONSE_KEYS, "classical.response")
            for k in ("omega0", "gamma", "phi"):
                if k in r:
                    _number(r[k], f"classical.response.{k}")
            for k in ("F0", "Omega"):
                if k not in r:
                    raise ConfigError("missing key", f"classical.response.{k}")
                r[k] = _values(r[k], f"classical.response.{k}")

    def _check_sweep(self):
        s = _need_dict(self.sweep, "sweep")
        _reject_unknown(s, _SWEEP_KEYS, "sweep")
        if s.get("command", "params") not in SWEEP_COMMANDS:
            raise ConfigError(f"expected one of {', '.join(SWEEP_COMMANDS)}", "sweep.command")
        vary = _need_dict(s.get("vary"), "sweep.vary")
        if not vary:
            raise ConfigError("nothing to vary", "sweep.vary")
        for key, vals in vary.items():
            path = f"sweep.vary.{key}"
            if key.split(".")[0] in ("sweep", "output", "name"):
                raise ConfigError("this key cannot be swept", path)
            if not isinstance(vals, list) or not vals:
                raise ConfigError("expected a non-empty list of values", path)

    # -------------------------------------------------------------- builders
    def coefficient_set(self) -> CoefficientSet:
        try:
            if self.model == "custom":
                base = harmonic_oscillator() if not self.coefficients else CoefficientSet.from_spec(
                    {k: self.coefficients.get(k, 0.0) for k in NAMES})
                return base
            params = dict(self.params)
            if self.model in ("parametric", "free-well"):
                params.setdefault("horizon", max(self.horizon, 1e-9))
            base = preset(self.model, **params)
            if self.coefficients:
                parts = {k: getattr(base, k) for k in NAMES}
                parts.update({k: time_function(v) for k, v in self.coefficients.items()})
                base = CoefficientSet(**parts)
            return base
        except (LieoscError, TypeError) as exc:
            path = "params" if self.model != "custom" else "coefficients"
            raise ConfigError(str(exc), path) from None

    def make_grid(self) -> Grid:
        g = {"x_min": -20.0, "x_max": 20.0, "N": 1024, **self.grid}
        if isinstance(g["N"], bool) or not isinstance(g["N"], int):
            raise ConfigError("expected an integer", "grid.N")
        try:
            return Grid(_number(g["x_min"], "grid.x_min"), _number(g["x_max"], "grid.x_max"), g["N"])
        except LieoscError as exc:
            raise ConfigError(str(exc), "grid") from None

    def k_object(self) -> KStrategy:
        ks = dict(self.k_strategy)
        try:
            return KStrategy(kind=ks.get("kind", "zero"), K=tuple(ks.get("K", ())), Kt=ks.get("Kt"),
                             Omega=float(ks.get("Omega", 1.0)), rho0=float(ks.get("rho0", 1.0)),
                             rhodot0=float(ks.get("rhodot0", 0.0)))
        except LieoscError as exc:
            raise ConfigError(str(exc), "k_strategy") from None

    def scenario(self) -> Scenario:
        sc = Scenario(self.name, self.coefficient_set(), self.k_object(), dict(self.initial),
                      self.make_grid(), self.horizon, self.dt_output, tuple(self.center),
                      self.dt_propagate, tuple(self.reference))
        try:
            sc.validate()
        except LieoscError as exc:
            raise ConfigError(str(exc), "<scenario>") from None
        return sc

    def with_override(self, dotted: str, value) -> "ScenarioConfig":
        """Copy with one nested key replaced, e.g. ``params.gamma``."""
        raw = self.to_dict()
        raw["sweep"] = None
        node = raw
        parts = dotted.split(".")
        for p in parts[:-1]:
            nxt = node.get(p)
            if nxt is None:
                nxt = node[p] = {}
            if not isinstance(nxt, dict):
                raise ConfigError("cannot descend into a non-object", f"sweep.vary.{dotted}")
            node = nxt
        node[parts[-1]] = value
        try:
            return ScenarioConfig.from_dict(raw)
        except ConfigError as exc:
            raise ConfigError(str(exc), f"sweep.vary.{dotted}") from None
