"""Pure numpy implementations of the hot kernels.

These define the reference behaviour; ``_ckernels.pyx`` must agree with them to
rounding.
"""

from __future__ import annotations

import math

import numpy as np


def partial_trace(rho: np.ndarray, dim_a: int, dim_b: int, keep_a: bool) -> np.ndarray:
    r = np.ascontiguousarray(rho, dtype=np.complex128).reshape(dim_a, dim_b, dim_a, dim_b)
    if keep_a:
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)


def spectral_fisher(q: np.ndarray, d1: np.ndarray, d2: np.ndarray, floor: float):
    """Fisher entries from eigenbasis derivative matrices.

    ``d1`` and ``d2`` are the parameter derivatives of rho expressed in rho's
    eigenbasis. Returns ``(f11, f22, f12)`` with pairs ``q_m + q_n <= floor`` dropped.
    """
    s = q[:, None] + q[None, :]
    keep = s > floor
    inv = np.zeros_like(s)
    inv[keep] = 2.0 / s[keep]
    f11 = float(np.sum(inv * np.abs(d1) ** 2))
    f22 = float(np.sum(inv * np.abs(d2) ** 2))
    # Re[<m|d1|n><n|d2|m>] summed over m,n
    f12 = float(np.sum(inv * (d1 * d2.T).real))
    return f11, f22, f12


def sld_eigenbasis(q: np.ndarray, d: np.ndarray, floor: float) -> np.ndarray:
    s = q[:, None] + q[None, :]
    keep = s > floor
    out = np.zeros(d.shape, dtype=np.complex128)
    out[keep] = 2.0 * d[keep] / s[keep]
    return out


def wigner(rho: np.ndarray, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """Complex Wigner sum on the ``xs`` x ``ps`` grid (real part is the Wigner function).

    With ``alpha = (x + i p)/sqrt 2`` and ``u = 4|alpha|^2`` the Fock-dyad kernel
    paired with ``rho[m, m+d]`` is ``(-1)^m e^{i d arg alpha} l_m^d(u) / pi``, where
    ``l_m^d = sqrt(m!/(m+d)!) u^{d/2} e^{-u/2} L_m^d(u)`` is bounded by one. ``l`` is
    advanced in ``m`` by the scaled Laguerre recurrence, which stays accurate at
    large ``u`` where the unscaled kernels cancel catastrophically.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    n = rho.shape[0]
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    alpha = (xs[:, None] + 1j * ps[None, :]) / math.sqrt(2.0)
    mod = np.abs(alpha)
    u = 4.0 * mod**2
    nz = u > 0
    phase = np.where(nz, alpha / np.where(nz, mod, 1.0), 1.0)
    log_u = np.log(np.where(nz, u, 1.0))

    w = np.zeros(alpha.shape, dtype=np.complex128)
    ph = np.ones(alpha.shape, dtype=np.complex128)
    for d in range(n):
        if d == 0:
            l_cur = np.exp(-0.5 * u)
        else:
            l_cur = np.where(nz, np.exp(-0.5 * u + 0.5 * d * log_u - 0.5 * math.lgamma(d + 1)), 0.0)
        l_prev = np.zeros_like(u)
        s = rho[0, d] * l_cur
        t = rho[d, 0] * l_cur
        for m in range(1, n - d):
            l_next = ((2 * m - 1 + d - u) * l_cur - math.sqrt((m - 1) * (m - 1 + d)) * l_prev) / math.sqrt(
                m * (m + d)
            )
            l_prev, l_cur = l_cur, l_next
            sign = -1.0 if m % 2 else 1.0
            s = s + sign * rho[m, m + d] * l_cur
            t = t + sign * rho[m + d, m] * l_cur
        # Hermitian rho makes t = conj(s), so the pair is exactly real
        w += s if d == 0 else ph * s + np.conj(ph) * t
        ph = ph * phase
    return w / math.pi
