"""Quadrature moments, squeezing, entropy-based non-Gaussianity and kurtosis.

Entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bosonic_model import quadratures
from .errors import CutoffTooSmall, DomainError, MultiModeState
from .tensor_core import as_matrix

MIN_MOMENT_CUTOFF = 6
SQUEEZE_MARGIN = 1e-6
ENTROPY_FLOOR = 1e-14
CLIP_TOL = 1e-9


@dataclass(frozen=True)
class GaussianSummary:
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    cov_xp: float
    min_rotated_variance: float
    symplectic_nu: float
    kurtosis_x: float
    kurtosis_p: float
    # filled by non_gaussianity()
    entropy_gaussian: float | None = None
    entropy_state: float | None = None
    delta: float | None = None

    @property
    def covariance(self) -> np.ndarray:
        return np.array([[self.var_x, self.cov_xp], [self.cov_xp, self.var_p]])


def _single_mode(rho) -> np.ndarray:
    dims = getattr(rho, "dims", None)
    if dims is not None and len(dims) != 1:
        raise MultiModeState(f"expected a single-mode state, got dims {dims}")
    return as_matrix(rho)


def quadrature_moments(rho) -> GaussianSummary:
    """First, second and fourth central quadrature moments of a single-mode state.

    Kurtosis is ``<(dX)^4> / <(dX)^2>^2`` with the fourth power taken of the
    truncated operator itself.
    """
    r = _single_mode(rho)
    n = r.shape[0]
    if n < MIN_MOMENT_CUTOFF:
        raise CutoffTooSmall(f"fourth moments need a cutoff >= {MIN_MOMENT_CUTOFF}, got {n}")
    x, p = quadratures(n)
    eye = np.eye(n)

    def ev(op):
        return float(np.trace(r @ op).real)

    mx, mp = ev(x), ev(p)
    dx = x - mx * eye
    dp = p - mp * eye
    dx2 = dx @ dx
    dp2 = dp @ dp
    vx, vp = ev(dx2), ev(dp2)
    cxp = ev(0.5 * (dx @ dp + dp @ dx))
    det = vx * vp - cxp * cxp
    mrv = float(np.linalg.eigvalsh(np.array([[vx, cxp], [cxp, vp]]))[0])
    return GaussianSummary(
        mean_x=mx,
        mean_p=mp,
        var_x=vx,
        var_p=vp,
        cov_xp=cxp,
        min_rotated_variance=mrv,
        symplectic_nu=math.sqrt(max(det, 0.0)),
        kurtosis_x=ev(dx2 @ dx2) / vx**2,
        kurtosis_p=ev(dp2 @ dp2) / vp**2,
    )


def squeezing_analysis(summary: GaussianSummary, margin: float = SQUEEZE_MARGIN) -> tuple[float, bool]:
    cov = np.array([[summary.var_x, summary.cov_xp], [summary.cov_xp, summary.var_p]])
    mrv = float(np.linalg.eigvalsh(cov)[0])
    return mrv, mrv < 0.5 - margin


def von_neumann_entropy(rho) -> float:
    q = np.linalg.eigvalsh(as_matrix(rho))
    if q.size and q[0] < -CLIP_TOL:
        raise DomainError(f"state has eigenvalue {q[0]:.3e} below -{CLIP_TOL:g}")
    q = q[q > ENTROPY_FLOOR]
    return float(max(-np.sum(q * np.log(q)), 0.0))


def gaussian_entropy(nu: float) -> float:
    """Entropy of a single-mode Gaussian state with symplectic eigenvalue ``nu``."""
    lo = nu - 0.5
    if lo <= 0:
        return 0.0
    hi = nu + 0.5
    return hi * math.log(hi) - lo * math.log(lo)


def non_gaussianity(rho) -> GaussianSummary:
    """Moments plus ``delta = S(gaussian reference) - S(rho)``."""
    s = quadrature_moments(rho)
    sg = gaussian_entropy(s.symplectic_nu)
    sr = von_neumann_entropy(rho)
    return replace(s, entropy_gaussian=sg, entropy_state=sr, delta=sg - sr)
