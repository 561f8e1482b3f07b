"""Quantum thermometry and magnetometry with two coupled bosonic resonators.

A probe resonator A is coupled to a resonator B that is driven by an external
field. The joint Gibbs state is reduced to A, and the package evaluates how much
the probe reveals about the bath temperature and the field amplitude: quantum
and classical Fisher information, the two-parameter QFIM, SLD compatibility,
Wigner functions and non-Gaussianity diagnostics.
"""

from ._kernels import BACKEND
from .bosonic_model import (
    DensityMatrix,
    Interaction,
    ModelConfig,
    annihilation,
    build_hamiltonian,
    gibbs_state,
    joint_state,
    number,
    probe,
    probe_state,
    quadratures,
)
from .errors import (
    ConfigError,
    CutoffTooSmall,
    DegenerateVariance,
    DimensionMismatch,
    DomainError,
    InvalidConfig,
    InvalidDimension,
    InvalidStep,
    MetrologyError,
    MultiModeState,
    NoConvergence,
    NonPositiveTemperature,
    NonUniformGrid,
    NotHermitian,
)
from .estimation import (
    ObservableId,
    ParamId,
    QfimResult,
    cfi_error_propagation,
    cfi_projective,
    lyapunov_residual,
    probe_derivative,
    qfi,
    qfim,
    sld,
    sld_compatibility,
)
from .phase_space import WignerGrid, wigner_grid, wigner_negativity
from .state_diagnostics import (
    GaussianSummary,
    non_gaussianity,
    quadrature_moments,
    squeezing_analysis,
    von_neumann_entropy,
)
from .tensor_core import eigh, herm_func, partial_trace

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigError",
    "CutoffTooSmall",
    "DegenerateVariance",
    "DensityMatrix",
    "DimensionMismatch",
    "DomainError",
    "GaussianSummary",
    "Interaction",
    "InvalidConfig",
    "InvalidDimension",
    "InvalidStep",
    "MetrologyError",
    "ModelConfig",
    "MultiModeState",
    "NoConvergence",
    "NonPositiveTemperature",
    "NonUniformGrid",
    "NotHermitian",
    "ObservableId",
    "ParamId",
    "QfimResult",
    "WignerGrid",
    "annihilation",
    "build_hamiltonian",
    "cfi_error_propagation",
    "cfi_projective",
    "eigh",
    "gibbs_state",
    "herm_func",
    "joint_state",
    "lyapunov_residual",
    "non_gaussianity",
    "number",
    "partial_trace",
    "probe",
    "probe_derivative",
    "probe_state",
    "qfi",
    "qfim",
    "quadrature_moments",
    "quadratures",
    "sld",
    "sld_compatibility",
    "squeezing_analysis",
    "von_neumann_entropy",
    "wigner_grid",
    "wigner_negativity",
]
