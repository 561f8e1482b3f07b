"""Parameter sweeps, cutoff convergence, CSV output and the command-line interface."""

from .figures import FIGURES, reproduce
from .runner import (
    PointResult,
    SweepResult,
    SweepRow,
    converge_cutoff,
    evaluate_point,
    run_sweep,
    write_csv,
)
from .spec import (
    PROFILES,
    Axis,
    Convergence,
    Profile,
    Quantity,
    SweepSpec,
    load_spec,
    parse_spec,
)

__all__ = [
    "FIGURES",
    "PROFILES",
    "Axis",
    "Convergence",
    "PointResult",
    "Profile",
    "Quantity",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "converge_cutoff",
    "evaluate_point",
    "load_spec",
    "parse_spec",
    "reproduce",
    "run_sweep",
    "write_csv",
]
