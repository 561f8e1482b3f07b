"""Command-line entry point: ``resonator-metrology <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from ..bosonic_model import probe
from ..errors import ConfigError, InvalidConfig, MetrologyError
from ..estimation import ObservableId, ParamId
from ..phase_space import wigner_grid
from .figures import FIGURES, reproduce
from .runner import run_sweep, write_csv, write_table, write_wigner_csv
from .spec import PROFILES, Convergence, Quantity, SweepSpec, load_spec, parse_axis, parse_base

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3
EXIT_IO = 4

# subcommand -> (base point, default axes)
DEFAULTS = {
    "qfi-map": (
        {"interaction": "quadratic", "g": 0.06, "temperature": 0.1, "b_ext": 0.0},
        ["temperature:0.01:1:25", "b_ext:0:0.1:11"],
    ),
    "qfi-vs-g": (
        {"interaction": "quadratic", "g": 0.0, "temperature": 0.06, "b_ext": 0.04},
        ["g:0.01:0.1:19"],
    ),
    "nongauss": (
        {"interaction": "quadratic", "g": 0.0, "temperature": 0.08, "b_ext": 0.06},
        ["g:0.005:0.1:20"],
    ),
    "cfi": (
        {"interaction": "quadratic", "g": 0.02, "temperature": 0.2, "b_ext": 0.04},
        ["temperature:0.02:1:50"],
    ),
    "qfim": (
        {"interaction": "quadratic", "g": 0.02, "temperature": 0.1, "b_ext": 0.0},
        ["temperature:0.01:1:25", "b_ext:0:0.1:11"],
    ),
    "sld-check": (
        {"interaction": "quadratic", "g": 0.02, "temperature": 0.1, "b_ext": 0.0},
        ["temperature:0.05:1:10", "b_ext:0:0.1:5"],
    ),
    "wigner": ({"interaction": "quadratic", "g": 0.08, "temperature": 0.01, "b_ext": 0.06}, []),
}


def _axis_arg(text: str) -> dict:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise argparse.ArgumentTypeError(f"expected NAME:MIN:MAX:COUNT[:log], got {text!r}")
    try:
        obj = {"name": parts[0], "min": float(parts[1]), "max": float(parts[2]), "count": int(parts[3])}
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number in axis {text!r}") from None
    if len(parts) == 5:
        obj["scale"] = parts[4]
    return obj


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON sweep spec")
    common.add_argument("--out", help="output CSV (a directory for reproduce); stdout if omitted")
    common.add_argument("--profile", choices=sorted(PROFILES), default="paper-default")
    common.add_argument("--cutoff-na", type=int)
    common.add_argument("--cutoff-nb", type=int)
    common.add_argument("--tol", type=float, help="enable cutoff convergence with this relative tolerance")
    common.add_argument("--max-cutoff", type=int, help="largest cutoff tried during convergence")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seedless", action="store_true", help="zero the timing column for byte-stable output")

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--interaction", choices=["quadratic", "radiation_pressure"])
    point.add_argument("--g", type=float)
    point.add_argument("--temperature", type=float)
    point.add_argument("--b-ext", type=float)
    point.add_argument("--omega-a", type=float)
    point.add_argument("--omega-b", type=float)

    axes = argparse.ArgumentParser(add_help=False)
    axes.add_argument(
        "--axis",
        action="append",
        type=_axis_arg,
        metavar="NAME:MIN:MAX:COUNT[:log]",
        help="swept parameter (temperature, b_ext or g); give once or twice",
    )

    parser = argparse.ArgumentParser(
        prog="resonator-metrology",
        description="Thermometry and magnetometry diagnostics for two coupled resonators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("qfi-map", "single-parameter QFI over a (T, B) grid"),
        ("qfi-vs-g", "single-parameter QFI versus coupling"),
    ):
        p = sub.add_parser(name, parents=[common, point, axes], help=text)
        p.add_argument("--param", choices=["t", "b"], default="t")
    sub.add_parser("nongauss", parents=[common, point, axes], help="moments, squeezing, non-Gaussianity")
    p = sub.add_parser("cfi", parents=[common, point, axes], help="classical Fisher information of an observable")
    p.add_argument("--observable", choices=[o.value for o in ObservableId], default="photon_number")
    p.add_argument("--param", choices=["t", "b"], default="t")
    p.add_argument("--method", choices=["error_propagation", "projective"], default="error_propagation")
    sub.add_parser("qfim", parents=[common, point, axes], help="two-parameter QFIM and SLD compatibility")
    sub.add_parser("sld-check", parents=[common, point, axes], help="SLD consistency diagnostics")
    sub.add_parser("wigner", parents=[common, point], help="probe Wigner function as x,p,w")
    p = sub.add_parser("reproduce", parents=[common], help="regenerate one figure's data")
    p.add_argument("figure_id", choices=sorted(FIGURES))
    return parser


def _quantities(args) -> list[Quantity]:
    cmd = args.command
    if cmd in ("qfi-map", "qfi-vs-g"):
        return [Quantity(f"qfi_{args.param}")]
    if cmd == "nongauss":
        return [Quantity("nongauss")]
    if cmd == "cfi":
        param = ParamId.parse(args.param)
        return [Quantity(f"qfi_{args.param}"), Quantity("cfi", ObservableId(args.observable), param, args.method)]
    if cmd == "qfim":
        return [Quantity("qfim")]
    if cmd == "sld-check":
        return [Quantity("sld_check")]
    raise ValueError(cmd)


def _point_overrides(args) -> dict:
    out = {}
    for flag, field in (
        ("interaction", "interaction"),
        ("g", "g"),
        ("temperature", "temperature"),
        ("b_ext", "b_ext"),
        ("omega_a", "omega_a"),
        ("omega_b", "omega_b"),
    ):
        v = getattr(args, flag, None)
        if v is not None:
            out[field] = v
    return out


def resolve_spec(args, profile) -> SweepSpec:
    """Build the sweep from defaults or ``--config``, then apply flag overrides."""
    if args.config:
        spec = load_spec(args.config, profile)
    else:
        base_obj, axis_texts = DEFAULTS[args.command]
        base = parse_base(base_obj, profile)
        axes = tuple(parse_axis(_axis_arg(t), f"axes[{i}]") for i, t in enumerate(axis_texts))
        spec = SweepSpec(base, axes, tuple(_quantities(args)), Convergence(False, profile.tol, profile.max_cutoff))

    base = spec.base
    try:
        base = base.with_(**_point_overrides(args))
        if args.cutoff_na is not None or args.cutoff_nb is not None:
            base = base.with_cutoffs(args.cutoff_na or base.n_a, args.cutoff_nb or base.n_b)
    except InvalidConfig as exc:
        raise ConfigError(str(exc), field="base") from None

    axes = spec.axes
    if getattr(args, "axis", None):
        if len(args.axis) > 2:
            raise ConfigError("at most two --axis flags", field="axes")
        axes = tuple(parse_axis(a, f"axes[{i}]") for i, a in enumerate(args.axis))
        if len({a.name for a in axes}) != len(axes):
            raise ConfigError("swept parameter names must be distinct", field="axes")

    conv = spec.convergence
    if args.tol is not None:
        if not args.tol > 0:
            raise ConfigError("tol must be > 0", field="convergence.tol")
        conv = replace(conv, enabled=True, tol=args.tol)
    if args.max_cutoff is not None:
        conv = replace(conv, max_cutoff=args.max_cutoff)
    if conv.enabled and conv.max_cutoff < max(base.n_a, base.n_b):
        raise ConfigError("max_cutoff must be >= the initial cutoffs", field="convergence.max_cutoff")
    return SweepSpec(base, axes, spec.quantities, conv, args.out or spec.output_path)


def _run_wigner(args, profile) -> int:
    if args.config:
        cfg = load_spec(args.config, profile).base
    else:
        cfg = parse_base(DEFAULTS["wigner"][0], profile)
    try:
        cfg = cfg.with_(**_point_overrides(args))
        if args.cutoff_na is not None or args.cutoff_nb is not None:
            cfg = cfg.with_cutoffs(args.cutoff_na or cfg.n_a, args.cutoff_nb or cfg.n_b)
    except InvalidConfig as exc:
        raise ConfigError(str(exc), field="base") from None
    axis = profile.wigner_axis()
    try:
        grid = wigner_grid(probe(cfg), axis, axis)
    except MetrologyError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    write_wigner_csv(grid, args.out or sys.stdout)
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    profile = PROFILES[args.profile]
    timing = not args.seedless
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        if args.command == "reproduce":
            out_dir = args.out or f"{args.figure_id}-data"
            paths, failed = reproduce(args.figure_id, out_dir, args.threads, timing, profile)
            for p in paths:
                print(p)
            return EXIT_PARTIAL if failed else EXIT_OK
        if args.command == "wigner":
            return _run_wigner(args, profile)
        spec = resolve_spec(args, profile)
        result = run_sweep(spec, threads=args.threads, timing=timing, profile=profile)
        if spec.output_path:
            write_csv(result, spec.output_path)
        else:
            write_table(result, sys.stdout)
        return EXIT_PARTIAL if result.failed else EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
