"""Wigner function of the single-mode probe on a rectangular phase-space grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import MultiModeState, NonUniformGrid, NotHermitian
from .tensor_core import as_matrix

DEFAULT_EXTENT = 5.0
DEFAULT_POINTS = 201
NORMALIZATION_TOL = 1e-2


@dataclass(frozen=True)
class WignerGrid:
    """Wigner values with ``values[i, j] = W(xs[i], ps[j])``."""

    xs: np.ndarray
    ps: np.ndarray
    values: np.ndarray
    cell_area: float
    min_value: float
    negative_volume: float
    total_integral: float

    def adequate(self, tol: float = NORMALIZATION_TOL) -> bool:
        """True when the grid captures the state's weight (normalization within ``tol``)."""
        return abs(self.total_integral - 1.0) <= tol


def default_axis() -> np.ndarray:
    return np.linspace(-DEFAULT_EXTENT, DEFAULT_EXTENT, DEFAULT_POINTS)


def _check_axis(name: str, axis) -> tuple[np.ndarray, float]:
    a = np.asarray(axis, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise NonUniformGrid(f"{name} must be a 1-D sequence with at least two points")
    d = np.diff(a)
    if not np.all(d > 0):
        raise NonUniformGrid(f"{name} must be strictly increasing")
    if np.max(np.abs(d - d[0])) > 1e-9 * max(1.0, abs(d[0])):
        raise NonUniformGrid(f"{name} spacing is not uniform")
    return a, float(d[0])


def wigner_grid(rho, xs=None, ps=None) -> WignerGrid:
    """Evaluate ``W(x, p)`` for a single-mode state; quadratures have vacuum variance 1/2."""
    dims = getattr(rho, "dims", None)
    if dims is not None and len(dims) != 1:
        raise MultiModeState(f"Wigner grids need a single-mode state, got dims {dims}")
    r = as_matrix(rho)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise MultiModeState(f"expected a square single-mode matrix, got shape {r.shape}")
    xs, dx = _check_axis("xs", default_axis() if xs is None else xs)
    ps, dp = _check_axis("ps", default_axis() if ps is None else ps)

    w = _kernels.wigner(r, xs, ps)
    residue = float(np.max(np.abs(w.imag))) if w.size else 0.0
    if residue > 1e-9:
        raise NotHermitian(f"Wigner sum has imaginary residue {residue:.3e}; is rho Hermitian?")
    values = np.ascontiguousarray(w.real)
    area = dx * dp
    return WignerGrid(
        xs=xs,
        ps=ps,
        values=values,
        cell_area=area,
        min_value=float(values.min()),
        negative_volume=float(np.sum(np.clip(-values, 0.0, None)) * area),
        total_integral=float(values.sum() * area),
    )


def wigner_negativity(grid: WignerGrid) -> tuple[float, float]:
    """Minimum value and Riemann-sum volume of the negative part."""
    v = grid.values
    return float(v.min()), float(np.sum(np.clip(-v, 0.0, None)) * grid.cell_area)
