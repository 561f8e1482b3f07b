"""Grid evaluation, cutoff convergence and CSV output."""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np
from threadpoolctl import threadpool_limits

from ..bosonic_model import ModelConfig, probe
from ..errors import MetrologyError
from ..estimation import (
    ParamId,
    cfi_projective,
    error_propagation_from,
    lyapunov_residual,
    probe_with_derivatives,
    qfi,
    qfim,
    sld,
    sld_compatibility,
)
from ..phase_space import WignerGrid, wigner_grid
from ..state_diagnostics import non_gaussianity, squeezing_analysis
from .spec import PROFILES, Profile, Quantity, SweepSpec

DEFAULT_PROFILE = PROFILES["paper-default"]
_DERIV_KINDS = {"qfi_t", "qfi_b", "qfim", "sld_check", "cfi"}
# round-off monitors: analytically zero, so a relative cutoff test is meaningless
NOISE_COLUMNS = frozenset(
    {
        "c_tb",
        "r_tb",
        "sld_residual_t",
        "sld_residual_b",
        "sld_mean_t",
        "sld_mean_b",
        "sld_qfi_rel_err_t",
        "sld_qfi_rel_err_b",
        "sld_c_tb",
        "sld_r_tb",
    }
)


@dataclass
class PointResult:
    values: dict
    errors: list = field(default_factory=list)
    wigner: WignerGrid | None = None


@dataclass
class SweepRow:
    index: int
    coords: tuple
    values: dict
    converged: bool
    cutoff: tuple
    error_codes: tuple
    wall_time_ms: int
    wigner: WignerGrid | None = None


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list

    @property
    def failed(self) -> bool:
        return any(r.error_codes for r in self.rows)

    def column(self, name: str) -> np.ndarray:
        """One output column as floats, nulls as NaN."""
        out = []
        for r in self.rows:
            if name in r.values:
                v = r.values[name]
            else:
                v = dict(zip((a.name for a in self.spec.axes), r.coords)).get(name)
            out.append(np.nan if v is None else float(v))
        return np.array(out)


def _code(exc: Exception) -> str:
    return exc.code if isinstance(exc, MetrologyError) else type(exc).__name__


def _quantity_values(q: Quantity, cfg: ModelConfig, shared: dict, profile: Profile):
    """Column values for one quantity; ``shared`` holds the state and its derivatives."""
    rho = shared["rho"]
    if q.name == "qfi_t":
        return {"qfi_t": qfi(rho, shared["d_t"], profile.qfi_floor)}, None
    if q.name == "qfi_b":
        return {"qfi_b": qfi(rho, shared["d_b"], profile.qfi_floor)}, None
    if q.name == "qfim":
        r = qfim(rho, shared["d_t"], shared["d_b"], profile.qfi_floor)
        return {
            "f_tt": r.f_tt,
            "f_bb": r.f_bb,
            "f_tb": r.f_tb,
            "det_fq": r.det,
            "c_tb": r.c_tb,
            "r_tb": r.r_tb,
        }, None
    if q.name == "cfi":
        d = shared["d_t"] if q.param is ParamId.TEMPERATURE else shared["d_b"]
        if q.method == "projective":
            v = cfi_projective(rho, d, q.observable, profile.prob_floor)
        else:
            v = error_propagation_from(rho, d, q.observable, profile.var_floor)
        return {q.columns()[0]: v}, None
    if q.name == "wigner":
        axis = profile.wigner_axis()
        grid = wigner_grid(rho, axis, axis)
        return {
            "wigner_min": grid.min_value,
            "wigner_negative_volume": grid.negative_volume,
            "wigner_integral": grid.total_integral,
        }, grid
    if q.name == "nongauss":
        s = non_gaussianity(rho)
        mrv, squeezed = squeezing_analysis(s)
        return {
            "delta": s.delta,
            "entropy_state": s.entropy_state,
            "entropy_gaussian": s.entropy_gaussian,
            "var_x": s.var_x,
            "var_p": s.var_p,
            "cov_xp": s.cov_xp,
            "min_rotated_variance": mrv,
            "squeezed": squeezed,
            "kurtosis_x": s.kurtosis_x,
            "kurtosis_p": s.kurtosis_p,
        }, None
    if q.name == "sld_check":
        out = {}
        ls = {}
        r = rho.matrix
        for tag in ("t", "b"):
            d = shared[f"d_{tag}"]
            l_op = sld(rho, d, profile.qfi_floor)
            ls[tag] = l_op
            f = qfi(rho, d, profile.qfi_floor)
            f_sld = float(np.trace(r @ l_op @ l_op).real)
            out[f"sld_residual_{tag}"] = lyapunov_residual(rho, d, l_op, profile.qfi_floor)
            out[f"sld_mean_{tag}"] = float(np.trace(r @ l_op).real)
            out[f"sld_qfi_rel_err_{tag}"] = abs(f_sld - f) / max(abs(f), 1e-300)
        out["sld_c_tb"], out["sld_r_tb"] = sld_compatibility(rho, ls["t"], ls["b"])
        return out, None
    raise ValueError(f"unknown quantity {q.name!r}")


def _needs_field(quantities) -> bool:
    for q in quantities:
        if q.name in ("qfi_b", "qfim", "sld_check"):
            return True
        if q.name == "cfi" and q.param is ParamId.MAGNETIC_FIELD:
            return True
    return False


def evaluate_point(
    cfg: ModelConfig, quantities, profile: Profile = DEFAULT_PROFILE
) -> PointResult:
    """Evaluate every quantity at one model point.

    A failing quantity leaves null cells and an error code; the rest still run.
    """
    values = {c: None for q in quantities for c in q.columns()}
    result = PointResult(values)
    shared = {}
    try:
        if any(q.name in _DERIV_KINDS for q in quantities):
            shared["rho"], shared["d_t"], shared["d_b"] = probe_with_derivatives(cfg, field=_needs_field(quantities))
        else:
            shared["rho"] = probe(cfg)
    except Exception as exc:  # noqa: BLE001 - reported per row
        result.errors.append(_code(exc))
        return result
    for q in quantities:
        try:
            vals, grid = _quantity_values(q, cfg, shared, profile)
        except Exception as exc:  # noqa: BLE001
            result.errors.append(_code(exc))
            continue
        values.update(vals)
        if grid is not None:
            result.wigner = grid
    return result


# -- cutoff convergence ---------------------------------------------------------------


def _scalar_close(new, old, tol) -> bool:
    if new is None or old is None:
        return new is None and old is None
    if isinstance(new, (bool, np.bool_)) or isinstance(old, (bool, np.bool_)):
        return bool(new) == bool(old)
    new, old = float(new), float(old)
    if not (math.isfinite(new) and math.isfinite(old)):
        return False
    return abs(new - old) <= tol * max(abs(new), 1e-12)


def _close(new, old, tol) -> bool:
    if isinstance(new, Mapping):
        return set(new) == set(old) and all(_scalar_close(new[k], old[k], tol) for k in new)
    if isinstance(new, (list, tuple, np.ndarray)):
        a, b = np.asarray(new, dtype=float), np.asarray(old, dtype=float)
        return a.shape == b.shape and all(_scalar_close(x, y, tol) for x, y in zip(a.flat, b.flat))
    return _scalar_close(new, old, tol)


def converge_cutoff(
    cfg: ModelConfig,
    quantity: Callable[[ModelConfig], object],
    tol: float = 1e-6,
    max_cutoff: int = 40,
    increment: int = 5,
):
    """Raise both cutoffs by ``increment`` until ``quantity`` changes by at most ``tol`` (relative).

    Returns ``(value, (n_a, n_b), converged)`` where ``value`` comes from the
    largest cutoff evaluated. ``quantity`` may return a scalar, an array or a
    mapping of named scalars; every entry must pass.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if max_cutoff < max(cfg.n_a, cfg.n_b):
        raise ValueError(f"max_cutoff {max_cutoff} is below the initial cutoffs ({cfg.n_a}, {cfg.n_b})")
    current = cfg
    value = quantity(current)
    while True:
        n_a, n_b = current.n_a + increment, current.n_b + increment
        if max(n_a, n_b) > max_cutoff:
            return value, (current.n_a, current.n_b), False
        nxt = current.with_cutoffs(n_a, n_b)
        new = quantity(nxt)
        if _close(new, value, tol):
            return new, (n_a, n_b), True
        current, value = nxt, new


# -- sweeps -----------------------------------------------------------------------------


def _run_row(spec: SweepSpec, index: int, coords, profile: Profile, timing: bool) -> SweepRow:
    t0 = time.perf_counter()
    cfg = spec.base.with_(**{a.name: v for a, v in zip(spec.axes, coords)})
    last = {}

    def evaluate(c):
        last["r"] = evaluate_point(c, spec.quantities, profile)
        return {k: v for k, v in last["r"].values.items() if k not in NOISE_COLUMNS}

    conv = spec.convergence
    if conv.enabled:
        _, cutoff, converged = converge_cutoff(cfg, evaluate, conv.tol, conv.max_cutoff)
    else:
        evaluate(cfg)
        cutoff, converged = (cfg.n_a, cfg.n_b), False
    res = last["r"]
    wall = round((time.perf_counter() - t0) * 1e3) if timing else 0
    return SweepRow(
        index=index,
        coords=tuple(coords),
        values=res.values,
        converged=converged,
        cutoff=cutoff,
        error_codes=tuple(dict.fromkeys(res.errors)),
        wall_time_ms=wall,
        wigner=res.wigner,
    )


def run_sweep(
    spec: SweepSpec,
    threads: int = 1,
    timing: bool = True,
    profile: Profile = DEFAULT_PROFILE,
) -> SweepResult:
    """Evaluate the grid; rows come back in row-major order whatever ``threads`` is.

    BLAS is pinned to one thread so each row is computed identically in any run.
    With ``timing=False`` the wall-time column is zero and output is byte-stable.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    grid = spec.grid()
    with threadpool_limits(limits=1, user_api="blas"):
        if threads == 1:
            rows = [_run_row(spec, i, c, profile, timing) for i, c in enumerate(grid)]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                rows = list(
                    pool.map(lambda ic: _run_row(spec, ic[0], ic[1], profile, timing), enumerate(grid))
                )
    return SweepResult(spec, rows)


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.16e}"


def wigner_path(output: Path, index: int) -> Path:
    return output.with_name(f"{output.stem}.wigner.{index}.csv")


def _write_wigner_rows(grid: WignerGrid, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "p", "w"])
    for i, x in enumerate(grid.xs):
        fx = format_value(x)
        for j, p in enumerate(grid.ps):
            w.writerow([fx, format_value(p), format_value(grid.values[i, j])])


def write_wigner_csv(grid: WignerGrid, target) -> None:
    """Write ``x,p,w`` rows to a path or an open text stream."""
    if hasattr(target, "write"):
        _write_wigner_rows(grid, target)
        return
    with open(target, "w", newline="", encoding="utf-8") as fh:
        _write_wigner_rows(grid, fh)


def write_table(result: SweepResult, fh) -> None:
    """Write the sweep table (header plus one line per row) to a text stream."""
    spec = result.spec
    names = [c for q in spec.quantities for c in q.columns()]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(spec.columns())
    for r in result.rows:
        w.writerow(
            [format_value(c) for c in r.coords]
            + [format_value(r.values[n]) for n in names]
            + [
                format_value(r.converged),
                str(r.cutoff[0]),
                str(r.cutoff[1]),
                ";".join(r.error_codes),
                str(r.wall_time_ms),
            ]
        )


def write_csv(result: SweepResult, path=None) -> Path:
    """Write the sweep table and any per-row Wigner grids next to it."""
    out = Path(path or result.spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        write_table(result, fh)
    for r in result.rows:
        if r.wigner is not None:
            write_wigner_csv(r.wigner, wigner_path(out, r.index))
    return out
