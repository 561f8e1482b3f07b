"""Fisher information of the probe for the bath temperature and the field amplitude.

Derivatives of the reduced probe state are central finite differences; all
Fisher quantities are evaluated in the eigenbasis of the probe state, with
pairs whose populations sum to at most ``floor`` dropped.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .bosonic_model import (
    DensityMatrix,
    ModelConfig,
    _hamiltonian,
    gibbs_from_spectrum,
    number,
    quadratures,
)
from .errors import DegenerateVariance, DimensionMismatch, InvalidStep
from .tensor_core import as_matrix, eigh, partial_trace, symmetrize

QFI_FLOOR = 1e-12
PROB_FLOOR = 1e-14
VAR_FLOOR = 1e-12


class ParamId(str, enum.Enum):
    TEMPERATURE = "temperature"
    MAGNETIC_FIELD = "magnetic_field"

    @classmethod
    def parse(cls, value) -> "ParamId":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("t", "temperature"):
            return cls.TEMPERATURE
        if key in ("b", "b_ext", "bext", "field", "magnetic_field"):
            return cls.MAGNETIC_FIELD
        raise ValueError(f"unknown parameter {value!r}; expected 'temperature' or 'b_ext'")

    @property
    def short(self) -> str:
        return "t" if self is ParamId.TEMPERATURE else "b"


class ObservableId(str, enum.Enum):
    PHOTON_NUMBER = "photon_number"
    QUADRATURE_X = "quadrature_x"
    QUADRATURE_X_SQUARED = "quadrature_x_squared"
    PARITY = "parity"

    @classmethod
    def parse(cls, value) -> "ObservableId":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"n": "photon_number", "x": "quadrature_x", "x2": "quadrature_x_squared"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(
                f"unknown observable {value!r}; expected one of {[o.value for o in cls]}"
            ) from None


@dataclass(frozen=True)
class QfimResult:
    f_tt: float
    f_bb: float
    f_tb: float
    det: float
    c_tb: float
    r_tb: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.f_tt, self.f_tb], [self.f_tb, self.f_bb]])

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


def default_step(value: float) -> float:
    return 1e-4 * max(abs(value), 0.01)


# -- probe family ---------------------------------------------------------------


def _spectrum(cfg: ModelConfig, b_ext: float):
    h = _hamiltonian(cfg.interaction, cfg.omega_a, cfg.omega_b, cfg.g, b_ext, cfg.n_a, cfg.n_b)
    return eigh(h)


def _reduced(spec, temperature: float, cfg: ModelConfig) -> np.ndarray:
    return partial_trace(gibbs_from_spectrum(spec, temperature), cfg.n_a, cfg.n_b, keep="A")


def _resolve_step(cfg: ModelConfig, param: ParamId, step: float | None) -> float:
    value = cfg.temperature if param is ParamId.TEMPERATURE else cfg.b_ext
    h = default_step(value) if step is None else float(step)
    if not h > 0 or not np.isfinite(h):
        raise InvalidStep(f"step must be a positive finite number, got {step}")
    if param is ParamId.TEMPERATURE and not cfg.temperature - h > 0:
        raise InvalidStep(f"temperature - step = {cfg.temperature - h} must stay > 0")
    return h


def _difference(up: np.ndarray, down: np.ndarray, h: float) -> np.ndarray:
    """Central difference of the normalized family ``rho / Tr rho``.

    Rounding leaves ``Tr d rho`` near ``eps / h`` rather than zero; removing it
    along ``rho`` (not the identity) keeps tiny populations untouched.
    """
    d = symmetrize((up - down) / (2 * h))
    return d - np.trace(d).real * symmetrize(0.5 * (up + down))


def probe_derivative(cfg: ModelConfig, param, step: float | None = None) -> np.ndarray:
    """Central difference of the reduced probe state with respect to T or B_ext.

    ``B_ext - step`` may go negative; the Hamiltonian is defined for any real field.
    """
    param = ParamId.parse(param)
    h = _resolve_step(cfg, param, step)
    if param is ParamId.TEMPERATURE:
        spec = _spectrum(cfg, cfg.b_ext)
        up = _reduced(spec, cfg.temperature + h, cfg)
        down = _reduced(spec, cfg.temperature - h, cfg)
    else:
        up = _reduced(_spectrum(cfg, cfg.b_ext + h), cfg.temperature, cfg)
        down = _reduced(_spectrum(cfg, cfg.b_ext - h), cfg.temperature, cfg)
    return _difference(up, down, h)


def probe_with_derivatives(
    cfg: ModelConfig, step_t: float | None = None, step_b: float | None = None, field: bool = True
) -> tuple[DensityMatrix, np.ndarray, np.ndarray | None]:
    """Probe state plus both derivatives from three diagonalizations.

    Bit-identical to calling ``probe`` and ``probe_derivative`` separately. With
    ``field=False`` the B derivative is skipped (returned as None) and a single
    diagonalization suffices.
    """
    ht = _resolve_step(cfg, ParamId.TEMPERATURE, step_t)
    hb = _resolve_step(cfg, ParamId.MAGNETIC_FIELD, step_b)
    spec = _spectrum(cfg, cfg.b_ext)
    rho = DensityMatrix(symmetrize(_reduced(spec, cfg.temperature, cfg)), (cfg.n_a,))
    d_t = _difference(_reduced(spec, cfg.temperature + ht, cfg), _reduced(spec, cfg.temperature - ht, cfg), ht)
    if not field:
        return rho, d_t, None
    d_b = _difference(
        _reduced(_spectrum(cfg, cfg.b_ext + hb), cfg.temperature, cfg),
        _reduced(_spectrum(cfg, cfg.b_ext - hb), cfg.temperature, cfg),
        hb,
    )
    return rho, d_t, d_b


def richardson_ratio(cfg: ModelConfig, param, step: float) -> float:
    """``|D(h) - D(h/2)| / |D(h/2) - D(h/4)|`` in max norm; about 4 for a second-order scheme."""
    d1 = probe_derivative(cfg, param, step)
    d2 = probe_derivative(cfg, param, step / 2)
    d4 = probe_derivative(cfg, param, step / 4)
    return float(np.max(np.abs(d1 - d2)) / np.max(np.abs(d2 - d4)))


# -- quantum Fisher information ----------------------------------------------------


def _eig_frame(rho, *derivs):
    r = as_matrix(rho)
    for d in derivs:
        if np.shape(d) != r.shape:
            raise DimensionMismatch(f"derivative shape {np.shape(d)} != state shape {r.shape}")
    spec = eigh(r)
    v = spec.eigenvectors
    vh = v.conj().T
    return spec.eigenvalues, v, [vh @ np.asarray(d, dtype=complex) @ v for d in derivs]


def qfi(rho, drho, floor: float = QFI_FLOOR) -> float:
    """Single-parameter QFI, ``sum 2 |<m|d rho|n>|^2 / (q_m + q_n)``."""
    q, _, (d,) = _eig_frame(rho, drho)
    f, _, _ = _kernels.spectral_fisher(q, d, d, floor)
    return f


def sld(rho, drho, floor: float = QFI_FLOOR) -> np.ndarray:
    """Symmetric logarithmic derivative, zero on pairs below the floor."""
    q, v, (d,) = _eig_frame(rho, drho)
    le = _kernels.sld_eigenbasis(q, d, floor)
    return symmetrize(v @ le @ v.conj().T)


def lyapunov_residual(rho, drho, l_op, floor: float = QFI_FLOOR) -> float:
    """Max of ``|d rho - (L rho + rho L)/2|`` over eigenbasis pairs with ``q_m + q_n > floor``."""
    q, _, (d, le) = _eig_frame(rho, drho, l_op)
    s = q[:, None] + q[None, :]
    res = d - 0.5 * le * s
    keep = s > floor
    return float(np.max(np.abs(res[keep]))) if keep.any() else 0.0


def sld_compatibility(rho, l_t, l_b) -> tuple[float, float]:
    """``(C_TB, R_TB)`` from ``Tr[rho (L_T L_B - L_B L_T)]``.

    ``C_TB`` is the trace divided by ``2i`` (real for Hermitian inputs) and ``R_TB``
    its real part, which vanishes analytically and so measures round-off.
    """
    r = as_matrix(rho)
    l_t = np.asarray(l_t)
    l_b = np.asarray(l_b)
    if l_t.shape != r.shape or l_b.shape != r.shape:
        raise DimensionMismatch("SLD operators must share the state's dimension")
    tr = np.trace(r @ (l_t @ l_b - l_b @ l_t))
    return float((tr / 2j).real), float(tr.real)


def qfim(rho, drho_t, drho_b, floor: float = QFI_FLOOR) -> QfimResult:
    q, _, (dt, db) = _eig_frame(rho, drho_t, drho_b)
    f_tt, f_bb, f_tb = _kernels.spectral_fisher(q, dt, db, floor)
    lt = _kernels.sld_eigenbasis(q, dt, floor)
    lb = _kernels.sld_eigenbasis(q, db, floor)
    # the compatibility trace is basis independent; rho is diag(q) here
    c_tb, r_tb = sld_compatibility(np.diag(q).astype(complex), lt, lb)
    return QfimResult(
        f_tt=f_tt, f_bb=f_bb, f_tb=f_tb, det=f_tt * f_bb - f_tb * f_tb, c_tb=c_tb, r_tb=r_tb
    )


# -- classical Fisher information for concrete measurements ---------------------------


def observable(obs, dim: int) -> np.ndarray:
    obs = ObservableId.parse(obs)
    if obs is ObservableId.PHOTON_NUMBER:
        return number(dim).astype(complex)
    if obs is ObservableId.PARITY:
        return np.diag((-1.0) ** np.arange(dim)).astype(complex)
    x, _ = quadratures(dim)
    if obs is ObservableId.QUADRATURE_X:
        return x
    return x @ x


@lru_cache(maxsize=64)
def _spectral_projectors(obs: ObservableId, dim: int):
    """Eigenvectors of the observable and the slices grouping degenerate eigenvalues."""
    spec = eigh(observable(obs, dim))
    w = spec.eigenvalues
    cuts = [0]
    for i in range(1, dim):
        if w[i] - w[i - 1] > 1e-8 * max(1.0, abs(w[i])):
            cuts.append(i)
    cuts.append(dim)
    groups = tuple(slice(a, b) for a, b in zip(cuts[:-1], cuts[1:]))
    v = spec.eigenvectors
    v.flags.writeable = False
    return v, groups


def outcome_probabilities(rho, obs) -> np.ndarray:
    obs = ObservableId.parse(obs)
    r = as_matrix(rho)
    v, groups = _spectral_projectors(obs, r.shape[0])
    diag = np.einsum("ij,ik,kj->j", v.conj(), r, v).real
    return np.array([diag[g].sum() for g in groups])


def cfi_projective(rho, drho, obs, prob_floor: float = PROB_FLOOR) -> float:
    """CFI of measuring the observable's spectral projectors.

    Photon number gives Fock populations, parity the even/odd sectors, and the
    quadratures the eigenprojectors of the truncated operator (a cutoff-dependent
    stand-in for homodyne detection).
    """
    obs = ObservableId.parse(obs)
    r = as_matrix(rho)
    d = np.asarray(drho)
    if d.shape != r.shape:
        raise DimensionMismatch(f"derivative shape {d.shape} != state shape {r.shape}")
    v, groups = _spectral_projectors(obs, r.shape[0])
    p_all = np.einsum("ij,ik,kj->j", v.conj(), r, v).real
    dp_all = np.einsum("ij,ik,kj->j", v.conj(), d, v).real
    total = 0.0
    for g in groups:
        p = p_all[g].sum()
        if p > prob_floor:
            total += dp_all[g].sum() ** 2 / p
    return float(total)


def error_propagation_from(rho, drho, obs, var_floor: float = VAR_FLOOR) -> float:
    """Error-propagation CFI from a precomputed state and derivative.

    ``Tr[O d rho]`` is the central difference of ``<O>`` (the trace is linear), up
    to the rounding-level trace correction applied to ``d rho``.
    """
    obs = ObservableId.parse(obs)
    r = as_matrix(rho)
    d = np.asarray(drho)
    if d.shape != r.shape:
        raise DimensionMismatch(f"derivative shape {d.shape} != state shape {r.shape}")
    o = observable(obs, r.shape[0])
    mean = np.trace(r @ o).real
    var = np.trace(r @ o @ o).real - mean**2
    if not var > var_floor:
        raise DegenerateVariance(f"Var({obs.value}) = {var:.3e} <= {var_floor:.1e}")
    return float(np.trace(d @ o).real ** 2 / var)


def cfi_error_propagation(
    cfg: ModelConfig,
    obs,
    param,
    step: float | None = None,
    var_floor: float = VAR_FLOOR,
) -> float:
    """``(d<O>/d lambda)^2 / Var(O)`` on the probe, the mean differentiated numerically."""
    obs = ObservableId.parse(obs)
    param = ParamId.parse(param)
    h = _resolve_step(cfg, param, step)
    o = observable(obs, cfg.n_a)
    spec = _spectrum(cfg, cfg.b_ext)
    rho = _reduced(spec, cfg.temperature, cfg)
    mean = np.trace(rho @ o).real
    var = np.trace(rho @ o @ o).real - mean**2
    if not var > var_floor:
        raise DegenerateVariance(f"Var({obs.value}) = {var:.3e} <= {var_floor:.1e}")
    if param is ParamId.TEMPERATURE:
        up = _reduced(spec, cfg.temperature + h, cfg)
        down = _reduced(spec, cfg.temperature - h, cfg)
    else:
        up = _reduced(_spectrum(cfg, cfg.b_ext + h), cfg.temperature, cfg)
        down = _reduced(_spectrum(cfg, cfg.b_ext - h), cfg.temperature, cfg)
    slope = (np.trace(up @ o).real - np.trace(down @ o).real) / (2 * h)
    return float(slope**2 / var)
