"""Preset sweeps regenerating the published figure data."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from ..bosonic_model import Interaction, ModelConfig, probe
from ..errors import ConfigError
from ..estimation import ObservableId, ParamId
from ..phase_space import wigner_grid
from ..state_diagnostics import non_gaussianity, squeezing_analysis
from .runner import DEFAULT_PROFILE, format_value, run_sweep, write_csv, write_wigner_csv
from .spec import Axis, Quantity, SweepSpec

Q = Interaction.QUADRATIC
RP = Interaction.RADIATION_PRESSURE

T_AXIS = Axis("temperature", 0.01, 1.0, 25)
B_AXIS = Axis("b_ext", 0.0, 0.1, 11)


@dataclass(frozen=True)
class Panel:
    name: str
    spec: SweepSpec | None = None
    point: ModelConfig | None = None  # single-state Wigner panel


def _sweep(interaction, g, temperature, b_ext, axes, quantities) -> SweepSpec:
    base = ModelConfig(g=g, temperature=temperature, b_ext=b_ext, interaction=interaction)
    return SweepSpec(base, tuple(axes), tuple(quantities))


def _cfi(obs, param):
    return Quantity("cfi", ObservableId(obs), ParamId(param), "error_propagation")


def _fig2():
    return [
        Panel(f"{tag}_g{g:g}", point=ModelConfig(g=g, temperature=0.01, b_ext=0.06, interaction=it))
        for tag, it, g in (("rp", RP, 0.08), ("quadratic", Q, 0.04), ("quadratic", Q, 0.08))
    ]


def _fig3():
    g_axis = Axis("g", 0.005, 0.1, 20)
    return [Panel("quadratic", _sweep(Q, 0.0, 0.08, 0.06, [g_axis], [Quantity("nongauss")]))]


def _fig4():
    panels = []
    for tag, it, gs in (("rp", RP, (0.02, 0.08)), ("quadratic", Q, (0.02, 0.06, 0.08))):
        for g in gs:
            panels.append(Panel(f"{tag}_g{g:g}", _sweep(it, g, 0.1, 0.0, [T_AXIS, B_AXIS], [Quantity("qfi_t")])))
    return panels


def _fig5():
    g_axis = Axis("g", 0.01, 0.1, 19)
    return [Panel("quadratic", _sweep(Q, 0.0, 0.06, 0.04, [g_axis], [Quantity("qfi_t")]))]


def _fig6():
    t_axis = Axis("temperature", 0.02, 1.0, 50)
    b_axis = Axis("b_ext", 0.0, 0.1, 21)
    panels = []
    for tag, it in (("rp", RP), ("quadratic", Q)):
        for g in (0.02, 0.08):
            panels.append(
                Panel(
                    f"photon_t_{tag}_g{g:g}",
                    _sweep(it, g, 0.1, 0.04, [t_axis], [Quantity("qfi_t"), _cfi("photon_number", "temperature")]),
                )
            )
    obs = [_cfi(o.value, "temperature") for o in ObservableId]
    panels.append(Panel("observables_t_quadratic_g0.08", _sweep(Q, 0.08, 0.1, 0.04, [t_axis], [Quantity("qfi_t")] + obs)))
    for tag, it in (("rp", RP), ("quadratic", Q)):
        for g in (0.02, 0.08):
            panels.append(
                Panel(
                    f"photon_b_{tag}_g{g:g}",
                    _sweep(it, g, 0.2, 0.0, [b_axis], [Quantity("qfi_b"), _cfi("photon_number", "magnetic_field")]),
                )
            )
    return panels


def _fig7():
    # log T axis wide enough to reach both limits where F_TB dies off
    t_axis = Axis("temperature", 1e-4, 100.0, 25, "log")
    panels = []
    for tag, it in (("rp", RP), ("quadratic", Q)):
        for g in (0.02, 0.08):
            panels.append(Panel(f"{tag}_g{g:g}", _sweep(it, g, 0.1, 0.0, [t_axis, B_AXIS], [Quantity("qfim")])))
    return panels


def _fig8():
    b_axis = Axis("b_ext", 0.0, 0.1, 21)
    panels = []
    for tag, it, t in (("rp", RP, 0.3), ("quadratic", Q, 0.06)):
        for g in (0.02, 0.04, 0.06, 0.08):
            panels.append(Panel(f"{tag}_g{g:g}", _sweep(it, g, t, 0.0, [b_axis], [Quantity("qfi_b")])))
    return panels


FIGURES = {
    "fig2": (_fig2, "probe Wigner functions at T=0.01, B=0.06"),
    "fig3": (_fig3, "non-Gaussianity and kurtosis versus g"),
    "fig4": (_fig4, "temperature QFI over (T, B)"),
    "fig5": (_fig5, "temperature QFI versus g"),
    "fig6": (_fig6, "photon-number and quadrature CFI against the QFI"),
    "fig7": (_fig7, "off-diagonal QFIM element over (T, B)"),
    "fig8": (_fig8, "field QFI versus B"),
}


def panels(figure_id: str) -> list[Panel]:
    try:
        build, _ = FIGURES[figure_id]
    except KeyError:
        raise ConfigError(f"unknown figure id {figure_id!r}; expected one of {sorted(FIGURES)}") from None
    return build()


def reproduce(figure_id: str, out_dir, threads: int = 1, timing: bool = True, profile=DEFAULT_PROFILE):
    """Write one CSV per panel into ``out_dir``; returns ``(paths, any_failed)``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    failed = False
    summary = []
    for panel in panels(figure_id):
        if panel.spec is not None:
            spec = panel.spec
            if spec.base.n_a != profile.n_a or spec.base.n_b != profile.n_b:
                spec = SweepSpec(spec.base.with_cutoffs(profile.n_a, profile.n_b), spec.axes, spec.quantities)
            result = run_sweep(spec, threads=threads, timing=timing, profile=profile)
            failed |= result.failed
            paths.append(write_csv(result, out_dir / f"{figure_id}_{panel.name}.csv"))
        else:
            cfg = panel.point.with_cutoffs(profile.n_a, profile.n_b)
            rho = probe(cfg)
            axis = profile.wigner_axis()
            grid = wigner_grid(rho, axis, axis)
            path = out_dir / f"{figure_id}_{panel.name}.csv"
            write_wigner_csv(grid, path)
            paths.append(path)
            mrv, squeezed = squeezing_analysis(non_gaussianity(rho))
            summary.append(
                [panel.name, cfg.interaction.value]
                + [format_value(v) for v in (cfg.g, cfg.temperature, cfg.b_ext)]
                + [format_value(v) for v in (grid.min_value, grid.negative_volume, grid.total_integral, mrv)]
                + [format_value(squeezed)]
            )
    if summary:
        path = out_dir / f"{figure_id}_summary.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(
                [
                    "panel",
                    "interaction",
                    "g",
                    "temperature",
                    "b_ext",
                    "wigner_min",
                    "wigner_negative_volume",
                    "wigner_integral",
                    "min_rotated_variance",
                    "squeezed",
                ]
            )
            w.writerows(summary)
        paths.append(path)
    return paths, failed
