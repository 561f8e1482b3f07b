"""Two coupled resonators in truncated Fock space.

Units: hbar = k_B = 1 and every energy is measured in units of omega_A.
Resonator A is the probe and always the first tensor factor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidConfig,
    InvalidDimension,
    NonPositiveTemperature,
)
from .tensor_core import (
    HERMITIAN_TOL,
    SpectralDecomposition,
    as_matrix,
    eigh,
    hermiticity_error,
    partial_trace,
    symmetrize,
)


class Interaction(str, enum.Enum):
    QUADRATIC = "quadratic"
    RADIATION_PRESSURE = "radiation_pressure"

    @classmethod
    def parse(cls, value) -> "Interaction":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"rp": "radiation_pressure", "radiationpressure": "radiation_pressure"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise InvalidConfig(
                f"unknown interaction {value!r}; expected 'quadratic' or 'radiation_pressure'"
            ) from None


@dataclass(frozen=True)
class ModelConfig:
    """Physical and numerical specification of one model instance."""

    g: float
    temperature: float
    b_ext: float = 0.0
    interaction: Interaction = Interaction.QUADRATIC
    omega_a: float = 1.0
    omega_b: float = 0.04
    n_a: int = 20
    n_b: int = 20

    def __post_init__(self):
        object.__setattr__(self, "interaction", Interaction.parse(self.interaction))
        problems = []
        if not self.omega_a > 0:
            problems.append("omega_a must be > 0")
        if not self.omega_b > 0:
            problems.append("omega_b must be > 0")
        if not self.temperature > 0:
            problems.append("temperature must be > 0")
        if not self.g >= 0:
            problems.append("g must be >= 0")
        if not self.b_ext >= 0:
            problems.append("b_ext must be >= 0")
        for name in ("n_a", "n_b"):
            v = getattr(self, name)
            if int(v) != v or v < 2:
                problems.append(f"{name} must be an integer >= 2")
        if problems:
            raise InvalidConfig("; ".join(problems))
        object.__setattr__(self, "n_a", int(self.n_a))
        object.__setattr__(self, "n_b", int(self.n_b))

    def with_cutoffs(self, n_a: int, n_b: int) -> "ModelConfig":
        return replace(self, n_a=n_a, n_b=n_b)

    def with_(self, **changes) -> "ModelConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class DensityMatrix:
    """A density operator plus its tensor factorization, ``(n,)`` or ``(n_a, n_b)``."""

    matrix: np.ndarray
    dims: tuple

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def check(self, tol: float = 1e-9) -> None:
        """Raise if the matrix is not Hermitian, unit-trace and PSD within ``tol``."""
        if int(np.prod(self.dims)) != self.dim:
            raise DimensionMismatch(f"dims {self.dims} do not match dimension {self.dim}")
        herr = hermiticity_error(self.matrix)
        if herr > tol:
            raise ValueError(f"not Hermitian: {herr:.3e}")
        tr = np.trace(self.matrix)
        if abs(tr - 1) > tol:
            raise ValueError(f"trace {tr} != 1")
        lo = np.linalg.eigvalsh(symmetrize(self.matrix))[0]
        if lo < -tol:
            raise ValueError(f"negative eigenvalue {lo:.3e}")


@lru_cache(maxsize=64)
def _ladder(dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    a.flags.writeable = False
    return a


def annihilation(dim: int) -> np.ndarray:
    """Truncated annihilation operator with ``<k|a|k+1> = sqrt(k+1)``."""
    if int(dim) != dim or dim < 2:
        raise InvalidDimension(f"Fock cutoff must be an integer >= 2, got {dim}")
    return _ladder(int(dim)).copy()


def number(dim: int) -> np.ndarray:
    a = annihilation(dim)
    return a.T @ a


def quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """``X = (a + a^dagger)/sqrt 2`` and ``P = (a - a^dagger)/(i sqrt 2)``."""
    a = annihilation(dim)
    x = (a + a.T) / np.sqrt(2.0)
    p = (a - a.T) / (1j * np.sqrt(2.0))
    return x.astype(complex), p


def _hamiltonian(
    interaction: Interaction,
    omega_a: float,
    omega_b: float,
    g: float,
    b_ext: float,
    n_a: int,
    n_b: int,
) -> np.ndarray:
    a = annihilation(n_a)
    b = annihilation(n_b)
    ia = np.eye(n_a)
    ib = np.eye(n_b)
    na = a.T @ a
    qb = b + b.T
    h = omega_a * np.kron(na, ib) + omega_b * np.kron(ia, b.T @ b) + b_ext * np.kron(ia, qb)
    if g:
        if interaction is Interaction.QUADRATIC:
            qa = a + a.T
            h = h + g * np.kron(qa @ qa, qb)
        else:
            h = h + g * np.kron(na, qb)
    return h.astype(complex)


def build_hamiltonian(cfg: ModelConfig) -> np.ndarray:
    """Total Hamiltonian on A (x) B.

    ``omega_A a^dag a + omega_B b^dag b + B_ext (b + b^dag)`` plus either
    ``g (a + a^dag)^2 (b + b^dag)`` (quadratic) or ``g a^dag a (b + b^dag)``
    (radiation pressure).
    """
    return _hamiltonian(
        cfg.interaction, cfg.omega_a, cfg.omega_b, cfg.g, cfg.b_ext, cfg.n_a, cfg.n_b
    )


def gibbs_weights(energies: np.ndarray, temperature: float) -> np.ndarray:
    """Boltzmann populations for ascending ``energies``, shifted by the ground energy."""
    if not temperature > 0:
        raise NonPositiveTemperature(f"temperature must be > 0, got {temperature}")
    w = np.exp(-(energies - energies[0]) / temperature)
    return w / w.sum()


def gibbs_from_spectrum(spec: SpectralDecomposition, temperature: float) -> np.ndarray:
    p = gibbs_weights(spec.eigenvalues, temperature)
    # underflowed weights are exact zeros; dropping their columns changes nothing
    keep = p > 0
    v = spec.eigenvectors[:, keep]
    return symmetrize((v * p[keep]) @ v.conj().T)


def gibbs_state(h, temperature: float, dims: tuple | None = None) -> DensityMatrix:
    """Thermal state ``exp(-(H - E0)/T) / Z`` with E0 the ground energy."""
    if not temperature > 0:
        raise NonPositiveTemperature(f"temperature must be > 0, got {temperature}")
    h = as_matrix(h)
    spec = eigh(h, HERMITIAN_TOL)
    rho = gibbs_from_spectrum(spec, temperature)
    return DensityMatrix(rho, tuple(dims) if dims is not None else (h.shape[0],))


def probe_state(rho_joint: DensityMatrix, cfg: ModelConfig) -> DensityMatrix:
    """Reduced state of resonator A."""
    if tuple(rho_joint.dims) != (cfg.n_a, cfg.n_b):
        raise DimensionMismatch(
            f"joint state dims {rho_joint.dims} do not match cutoffs ({cfg.n_a}, {cfg.n_b})"
        )
    r = partial_trace(rho_joint.matrix, cfg.n_a, cfg.n_b, keep="A")
    return DensityMatrix(symmetrize(r), (cfg.n_a,))


def joint_state(cfg: ModelConfig) -> DensityMatrix:
    return gibbs_state(build_hamiltonian(cfg), cfg.temperature, dims=(cfg.n_a, cfg.n_b))


def probe(cfg: ModelConfig) -> DensityMatrix:
    """Gibbs state of the coupled pair reduced to the probe."""
    return probe_state(joint_state(cfg), cfg)
