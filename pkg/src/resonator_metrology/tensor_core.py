"""Dense complex-matrix layer: Hermitian spectra, operator functions, tensor products.

Convention: in every bipartite space the first Kronecker factor is resonator A.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, DomainError, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-9


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and the unitary whose columns are the eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    """Unwrap a DensityMatrix-like object (anything with ``.matrix``) into an ndarray."""
    m = getattr(m, "matrix", m)
    return np.asarray(m)


def hermiticity_error(m) -> float:
    """Entrywise max of ``|M - M^dagger|``."""
    m = as_matrix(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def eigh(m, tol: float = HERMITIAN_TOL) -> SpectralDecomposition:
    """Hermitian eigendecomposition with eigenvalues in ascending order.

    Raises NotHermitian when ``max|M - M^dagger| > tol`` and NoConvergence when
    LAPACK reports that the tridiagonal QR/divide-and-conquer iteration failed.
    """
    m = as_matrix(m)
    err = hermiticity_error(m)
    if not err <= tol:
        raise NotHermitian(f"matrix is not Hermitian (max |M - M^dagger| = {err:.3e} > {tol:.1e})")
    if np.iscomplexobj(m) and not np.any(m.imag):
        # real symmetric input: the real solver is several times faster
        m = m.real
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return SpectralDecomposition(w, v)


def herm_func(m, f: Callable[[np.ndarray], np.ndarray], tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    ``f`` receives the eigenvalue array and must return an array of the same
    shape. Non-finite outputs (log of a negative eigenvalue, say) raise DomainError.
    """
    spec = eigh(m, tol)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(spec.eigenvalues))
    if fw.shape != spec.eigenvalues.shape:
        raise DomainError("f must map the eigenvalue array to an array of the same shape")
    if np.iscomplexobj(fw):
        if np.any(np.abs(fw.imag) > 0):
            raise DomainError("f returned complex values")
        fw = fw.real
    if not np.all(np.isfinite(fw)):
        bad = spec.eigenvalues[~np.isfinite(fw)]
        raise DomainError(f"f is undefined on eigenvalue(s) {bad[:3]}")
    v = spec.eigenvectors
    return symmetrize((v * fw) @ v.conj().T)


def partial_trace(rho, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    """Reduce a bipartite operator on A (x) B to the factor named by ``keep``."""
    r = as_matrix(rho)
    if keep not in ("A", "B"):
        raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")
    if r.ndim != 2 or r.shape != (dim_a * dim_b, dim_a * dim_b):
        raise DimensionMismatch(
            f"operator of shape {r.shape} does not factor as {dim_a} x {dim_b}"
        )
    return _kernels.partial_trace(r, dim_a, dim_b, keep == "A")
