# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``; same signatures and results."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, lgamma, log, sqrt

cnp.import_array()


def partial_trace(rho, Py_ssize_t dim_a, Py_ssize_t dim_b, bint keep_a):
    cdef const double complex[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef Py_ssize_t i, j, k
    cdef double complex acc
    if keep_a:
        out = np.zeros((dim_a, dim_a), dtype=np.complex128)
    else:
        out = np.zeros((dim_b, dim_b), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    if keep_a:
        for i in range(dim_a):
            for k in range(dim_a):
                acc = 0
                for j in range(dim_b):
                    acc = acc + r[i * dim_b + j, k * dim_b + j]
                o[i, k] = acc
    else:
        for j in range(dim_b):
            for k in range(dim_b):
                acc = 0
                for i in range(dim_a):
                    acc = acc + r[i * dim_b + j, i * dim_b + k]
                o[j, k] = acc
    return out


def spectral_fisher(q, d1, d2, double floor):
    cdef const double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double complex[:, ::1] a = np.ascontiguousarray(d1, dtype=np.complex128)
    cdef const double complex[:, ::1] b = np.ascontiguousarray(d2, dtype=np.complex128)
    cdef Py_ssize_t n = qv.shape[0], m, k
    cdef double s, w, f11 = 0.0, f22 = 0.0, f12 = 0.0
    cdef double complex x, y
    for m in range(n):
        for k in range(n):
            s = qv[m] + qv[k]
            if s <= floor:
                continue
            w = 2.0 / s
            x = a[m, k]
            y = b[m, k]
            f11 += w * (x.real * x.real + x.imag * x.imag)
            f22 += w * (y.real * y.real + y.imag * y.imag)
            # Re[a_mk * b_km]
            f12 += w * (x * b[k, m]).real
    return f11, f22, f12


def sld_eigenbasis(q, d, double floor):
    cdef const double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double complex[:, ::1] dv = np.ascontiguousarray(d, dtype=np.complex128)
    cdef Py_ssize_t n = qv.shape[0], m, k
    cdef double s
    out = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    for m in range(n):
        for k in range(n):
            s = qv[m] + qv[k]
            if s > floor:
                o[m, k] = 2.0 * dv[m, k] / s
    return out


def wigner(rho, xs, ps):
    r_arr = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef const double[:, ::1] rr = np.ascontiguousarray(r_arr.real)
    cdef const double[:, ::1] ri = np.ascontiguousarray(r_arr.imag)
    cdef const double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(ps, dtype=np.float64)
    cdef Py_ssize_t n = rr.shape[0], nx = xv.shape[0], npp = pv.shape[0]
    cdef Py_ssize_t i, j, m, d
    cdef double ar, ai, mod, u, log_u, cr, ci, phr, phi, tmp
    cdef double l_prev, l_cur, l_next, sign, sr, si, tr, ti, wr, wi
    cdef double inv_sqrt2 = 1.0 / sqrt(2.0)
    # half log-factorials and recurrence coefficients, shared by every grid point
    cdef double[::1] half_lgam = np.empty(max(n, 1), dtype=np.float64)
    cdef double[:, ::1] c_inv = np.zeros((max(n, 1), max(n, 1)), dtype=np.float64)
    cdef double[:, ::1] c_prev = np.zeros((max(n, 1), max(n, 1)), dtype=np.float64)
    for d in range(n):
        half_lgam[d] = 0.5 * lgamma(d + 1.0)
        for m in range(1, n - d):
            c_inv[d, m] = 1.0 / sqrt(<double>(m * (m + d)))
            c_prev[d, m] = sqrt(<double>((m - 1) * (m - 1 + d))) * c_inv[d, m]
    out = np.empty((nx, npp), dtype=np.complex128)
    cdef double complex[:, ::1] o = out

    for i in range(nx):
        for j in range(npp):
            ar = xv[i] * inv_sqrt2
            ai = pv[j] * inv_sqrt2
            mod = sqrt(ar * ar + ai * ai)
            u = 4.0 * mod * mod
            if mod > 0:
                cr = ar / mod
                ci = ai / mod
                log_u = log(u)
            else:
                cr = 1.0
                ci = 0.0
                log_u = 0.0
            phr = 1.0
            phi = 0.0
            wr = 0.0
            wi = 0.0
            for d in range(n):
                if d == 0:
                    l_cur = exp(-0.5 * u)
                elif u > 0:
                    l_cur = exp(-0.5 * u + 0.5 * d * log_u - half_lgam[d])
                else:
                    l_cur = 0.0
                l_prev = 0.0
                sr = rr[0, d] * l_cur
                si = ri[0, d] * l_cur
                tr = rr[d, 0] * l_cur
                ti = ri[d, 0] * l_cur
                sign = 1.0
                for m in range(1, n - d):
                    l_next = (2 * m - 1 + d - u) * c_inv[d, m] * l_cur - c_prev[d, m] * l_prev
                    l_prev = l_cur
                    l_cur = l_next
                    sign = -sign
                    sr += sign * rr[m, m + d] * l_cur
                    si += sign * ri[m, m + d] * l_cur
                    tr += sign * rr[m + d, m] * l_cur
                    ti += sign * ri[m + d, m] * l_cur
                if d == 0:
                    wr += sr
                    wi += si
                else:
                    # ph * s + conj(ph) * t
                    wr += (phr * sr - phi * si) + (phr * tr + phi * ti)
                    wi += (phr * si + phi * sr) + (phr * ti - phi * tr)
                tmp = phr * cr - phi * ci
                phi = phr * ci + phi * cr
                phr = tmp
            o[i, j] = (wr + 1j * wi) / 3.141592653589793
    return out
