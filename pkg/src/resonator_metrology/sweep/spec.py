"""Sweep specifications, the numerical profile, and JSON config parsing."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..bosonic_model import Interaction, ModelConfig
from ..errors import ConfigError, InvalidConfig
from ..estimation import ObservableId, ParamId

AXIS_NAMES = ("temperature", "b_ext", "g")
SIMPLE_QUANTITIES = ("qfi_t", "qfi_b", "qfim", "wigner", "nongauss", "sld_check")
CFI_METHODS = ("error_propagation", "projective")


@dataclass(frozen=True)
class Profile:
    """Bundled numerical defaults."""

    name: str = "paper-default"
    n_a: int = 20
    n_b: int = 20
    qfi_floor: float = 1e-12
    prob_floor: float = 1e-14
    var_floor: float = 1e-12
    wigner_extent: float = 5.0
    wigner_points: int = 201
    tol: float = 1e-6
    max_cutoff: int = 40

    def wigner_axis(self) -> np.ndarray:
        return np.linspace(-self.wigner_extent, self.wigner_extent, self.wigner_points)


PROFILES = {"paper-default": Profile()}


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int
    scale: str = "linear"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class Quantity:
    name: str
    observable: ObservableId | None = None
    param: ParamId | None = None
    method: str = "error_propagation"

    def columns(self) -> list[str]:
        if self.name == "qfim":
            return ["f_tt", "f_bb", "f_tb", "det_fq", "c_tb", "r_tb"]
        if self.name == "wigner":
            return ["wigner_min", "wigner_negative_volume", "wigner_integral"]
        if self.name == "nongauss":
            return [
                "delta",
                "entropy_state",
                "entropy_gaussian",
                "var_x",
                "var_p",
                "cov_xp",
                "min_rotated_variance",
                "squeezed",
                "kurtosis_x",
                "kurtosis_p",
            ]
        if self.name == "sld_check":
            return [
                "sld_residual_t",
                "sld_residual_b",
                "sld_mean_t",
                "sld_mean_b",
                "sld_qfi_rel_err_t",
                "sld_qfi_rel_err_b",
                "sld_c_tb",
                "sld_r_tb",
            ]
        if self.name == "cfi":
            tag = "ep" if self.method == "error_propagation" else "proj"
            return [f"cfi_{tag}_{self.observable.value}_{self.param.short}"]
        return [self.name]

    def to_json(self):
        if self.name != "cfi":
            return self.name
        return {
            "name": "cfi",
            "observable": self.observable.value,
            "param": "temperature" if self.param is ParamId.TEMPERATURE else "b_ext",
            "method": self.method,
        }


@dataclass(frozen=True)
class Convergence:
    enabled: bool = False
    tol: float = 1e-6
    max_cutoff: int = 40


@dataclass(frozen=True)
class SweepSpec:
    base: ModelConfig
    axes: tuple[Axis, ...]
    quantities: tuple[Quantity, ...]
    convergence: Convergence = field(default_factory=Convergence)
    output_path: str | None = None

    def columns(self) -> list[str]:
        cols = [a.name for a in self.axes]
        for q in self.quantities:
            cols.extend(q.columns())
        return cols + ["converged", "cutoff_na", "cutoff_nb", "error_code", "wall_time_ms"]

    def grid(self) -> list[tuple[float, ...]]:
        """Grid coordinates in row-major axis order (last axis fastest)."""
        vals = [[float(v) for v in a.values()] for a in self.axes]
        return list(itertools.product(*vals))

    def to_json(self) -> dict:
        b = self.base
        return {
            "base": {
                "omega_a": b.omega_a,
                "omega_b": b.omega_b,
                "g": b.g,
                "b_ext": b.b_ext,
                "temperature": b.temperature,
                "interaction": b.interaction.value,
                "n_a": b.n_a,
                "n_b": b.n_b,
            },
            "axes": [
                {"name": a.name, "min": a.min, "max": a.max, "count": a.count, "scale": a.scale}
                for a in self.axes
            ],
            "quantities": [q.to_json() for q in self.quantities],
            "convergence": {
                "enabled": self.convergence.enabled,
                "tol": self.convergence.tol,
                "max_cutoff": self.convergence.max_cutoff,
            },
            "output_path": self.output_path,
        }


# -- validation -------------------------------------------------------------------------


def _check_keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ConfigError("expected a JSON object", field=where or "<root>")
    for k in obj:
        if k not in allowed:
            raise ConfigError(f"unknown key '{k}'", field=f"{where}.{k}" if where else k)
    for k in required:
        if k not in obj:
            raise ConfigError("missing required key", field=f"{where}.{k}" if where else k)


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"expected a number, got {v!r}", field=where)
    if not np.isfinite(v):
        raise ConfigError("must be finite", field=where)
    return float(v)


def _integer(v, where):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"expected an integer, got {v!r}", field=where)
    return v


_BASE_KEYS = ("omega_a", "omega_b", "g", "b_ext", "temperature", "interaction", "n_a", "n_b")


def parse_base(obj, profile: Profile = PROFILES["paper-default"], where="base") -> ModelConfig:
    _check_keys(obj, _BASE_KEYS, ("g", "temperature", "interaction"), where)
    kw = {}
    for k in ("omega_a", "omega_b", "g", "b_ext", "temperature"):
        if k in obj:
            kw[k] = _number(obj[k], f"{where}.{k}")
    for k in ("n_a", "n_b"):
        kw[k] = _integer(obj[k], f"{where}.{k}") if k in obj else getattr(profile, k)
    try:
        kw["interaction"] = Interaction.parse(obj["interaction"])
        return ModelConfig(**kw)
    except InvalidConfig as exc:
        raise ConfigError(str(exc), field=where) from None


def parse_axis(obj, where) -> Axis:
    _check_keys(obj, ("name", "min", "max", "count", "scale"), ("name", "min", "max", "count"), where)
    name = obj["name"]
    if name not in AXIS_NAMES:
        raise ConfigError(f"axis name must be one of {AXIS_NAMES}, got {name!r}", field=f"{where}.name")
    lo = _number(obj["min"], f"{where}.min")
    hi = _number(obj["max"], f"{where}.max")
    count = _integer(obj["count"], f"{where}.count")
    scale = obj.get("scale", "linear")
    if not hi > lo:
        raise ConfigError("max must be strictly greater than min", field=f"{where}.max")
    if count < 2:
        raise ConfigError("count must be >= 2", field=f"{where}.count")
    if scale not in ("linear", "log"):
        raise ConfigError("scale must be 'linear' or 'log'", field=f"{where}.scale")
    if scale == "log" and lo <= 0:
        raise ConfigError("log axes need min > 0", field=f"{where}.min")
    if name == "temperature" and lo <= 0:
        raise ConfigError("temperature axis must stay > 0", field=f"{where}.min")
    if name in ("g", "b_ext") and lo < 0:
        raise ConfigError(f"{name} axis must stay >= 0", field=f"{where}.min")
    return Axis(name, lo, hi, count, scale)


def parse_quantity(obj, where) -> Quantity:
    if isinstance(obj, str):
        if obj not in SIMPLE_QUANTITIES:
            raise ConfigError(
                f"unknown quantity {obj!r}; expected one of {SIMPLE_QUANTITIES} or a cfi object",
                field=where,
            )
        return Quantity(obj)
    _check_keys(obj, ("name", "observable", "param", "method"), ("name",), where)
    if obj["name"] != "cfi":
        if obj["name"] in SIMPLE_QUANTITIES and len(obj) == 1:
            return Quantity(obj["name"])
        raise ConfigError(f"unknown quantity object {obj['name']!r}", field=f"{where}.name")
    for k in ("observable", "param"):
        if k not in obj:
            raise ConfigError("missing required key", field=f"{where}.{k}")
    try:
        obs = ObservableId.parse(obj["observable"])
    except ValueError as exc:
        raise ConfigError(str(exc), field=f"{where}.observable") from None
    try:
        param = ParamId.parse(obj["param"])
    except ValueError as exc:
        raise ConfigError(str(exc), field=f"{where}.param") from None
    method = obj.get("method", "error_propagation")
    if method not in CFI_METHODS:
        raise ConfigError(f"method must be one of {CFI_METHODS}", field=f"{where}.method")
    return Quantity("cfi", obs, param, method)


def parse_spec(obj, profile: Profile = PROFILES["paper-default"]) -> SweepSpec:
    _check_keys(
        obj,
        ("base", "axes", "quantities", "convergence", "output_path"),
        ("base", "axes", "quantities"),
        "",
    )
    base = parse_base(obj["base"], profile)

    axes_obj = obj["axes"]
    if not isinstance(axes_obj, list) or not 1 <= len(axes_obj) <= 2:
        raise ConfigError("expected a list of 1 or 2 axes", field="axes")
    axes = tuple(parse_axis(a, f"axes[{i}]") for i, a in enumerate(axes_obj))
    if len({a.name for a in axes}) != len(axes):
        raise ConfigError("swept parameter names must be distinct", field="axes")

    q_obj = obj["quantities"]
    if not isinstance(q_obj, list) or not q_obj:
        raise ConfigError("expected a non-empty list", field="quantities")
    quantities = tuple(parse_quantity(q, f"quantities[{i}]") for i, q in enumerate(q_obj))
    seen = set()
    for i, q in enumerate(quantities):
        for c in q.columns():
            if c in seen:
                raise ConfigError(f"duplicate output column '{c}'", field=f"quantities[{i}]")
            seen.add(c)

    conv = Convergence(tol=profile.tol, max_cutoff=profile.max_cutoff)
    if "convergence" in obj:
        c = obj["convergence"]
        _check_keys(c, ("enabled", "tol", "max_cutoff"), (), "convergence")
        enabled = c.get("enabled", False)
        if not isinstance(enabled, bool):
            raise ConfigError("expected true or false", field="convergence.enabled")
        tol = _number(c["tol"], "convergence.tol") if "tol" in c else profile.tol
        if not tol > 0:
            raise ConfigError("tol must be > 0", field="convergence.tol")
        mc = _integer(c["max_cutoff"], "convergence.max_cutoff") if "max_cutoff" in c else profile.max_cutoff
        if mc < max(base.n_a, base.n_b):
            raise ConfigError("max_cutoff must be >= the initial cutoffs", field="convergence.max_cutoff")
        conv = Convergence(enabled, tol, mc)

    out = obj.get("output_path")
    if out is not None and not isinstance(out, str):
        raise ConfigError("expected a string", field="output_path")
    return SweepSpec(base, axes, quantities, conv, out)


def load_spec(path, profile: Profile = PROFILES["paper-default"]) -> SweepSpec:
    """Read and validate a JSON sweep config; errors carry the line or field."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, line=exc.lineno) from None
    return parse_spec(obj, profile)
