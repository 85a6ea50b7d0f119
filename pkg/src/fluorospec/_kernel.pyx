# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled double Bessel-series kernel; mirrors ``_kernel_py.spectrum_grid``."""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, exp, expm1, hypot
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"

cdef double SING_THRESHOLD = 1e-3
cdef int SERIES_TERMS = 5
cdef double MOMENT_SERIES_RADIUS = 2.0


cdef inline double complex cexp_(double complex z) noexcept nogil:
    cdef double e = exp(z.real)
    return e * cos(z.imag) + 1j * (e * sin(z.imag))


cdef inline double complex phi1(double complex z) noexcept nogil:
    cdef double x = z.real, y = z.imag, s
    if x == 0.0 and y == 0.0:
        return 1.0
    s = sin(0.5 * y)
    return ((expm1(x) * cos(y) - 2.0 * s * s) + 1j * (exp(x) * sin(y))) / z


cdef void moments(double complex z, int jmax, double complex* out) noexcept nogil:
    cdef int i, j
    cdef double complex term, acc, ez, prev
    if hypot(z.real, z.imag) <= MOMENT_SERIES_RADIUS:
        for j in range(jmax + 1):
            term = 1.0
            acc = term / (j + 1)
            for i in range(1, 40):
                term = term * z / i
                acc = acc + term / (i + j + 1)
            out[j] = acc
    else:
        ez = cexp_(z)
        prev = phi1(z)
        out[0] = prev
        for j in range(1, jmax + 1):
            prev = (ez - j * prev) / z
            out[j] = prev


cdef double complex f_series(double complex a, double complex b, double t) noexcept nogil:
    cdef double complex mom[8]
    cdef double complex w = a * t, wn = 1.0, acc = 0.0
    cdef double fact = 1.0
    cdef int n
    moments(-b * t, SERIES_TERMS + 1, mom)
    for n in range(SERIES_TERMS + 1):
        fact *= (n + 1)
        acc = acc + wn / fact * mom[n + 1]
        wn = wn * w
    return t * t * acc


cdef void _row(double t, double delta, int kmax, const double* jk,
               double gamma_s, double gamma_filter, double omega_f,
               const double complex* rot, const double complex* h_d,
               const double complex* b_d, const double complex* eb_d,
               double* diag_out, double* nondiag_out) noexcept nogil:
    cdef int ik, ip, idx, nk = 2 * kmax + 1
    cdef double half = 0.5 * gamma_filter
    cdef double kw, abs_a, diag = 0.0, nondiag = 0.0, re
    cdef double complex a, c, vk, inv_a, inv_at, phi_a, damped, f, acc
    cdef bint small
    cdef double complex* g = <double complex*> malloc(2 * nk * sizeof(double complex))
    cdef double complex* ec = g + nk
    for ip in range(nk):
        kw = (ip - kmax) * omega_f
        c = (half + gamma_s) + 1j * (kw - delta)
        g[ip] = t * phi1(-c * t)
        ec[ip] = cexp_(-c * t)
    for ik in range(nk):
        if jk[ik] == 0.0:
            continue
        kw = (ik - kmax) * omega_f
        a = (half - gamma_s) + 1j * (delta - kw)
        vk = jk[ik] * (rot[ik].real - 1j * rot[ik].imag)
        if hypot(a.real, a.imag) * t < SING_THRESHOLD:
            for ip in range(nk):
                f = f_series(a, b_d[ip - ik + 2 * kmax], t)
                re = (vk * jk[ip] * rot[ip] * f).real
                if ip == ik:
                    diag += re
                else:
                    nondiag += re
        else:
            # divided difference where |A| >= |B|, split form elsewhere
            abs_a = hypot(a.real, a.imag)
            inv_a = 1.0 / a
            small = abs_a * t < 1.0
            if small:
                phi_a = phi1(-a * t)
            else:
                inv_at = inv_a / t
            acc = 0.0
            for ip in range(nk):
                idx = ip - ik + 2 * kmax
                if abs_a >= hypot(b_d[idx].real, b_d[idx].imag):
                    f = (g[ip] - h_d[idx]) * inv_a
                else:
                    if small:
                        damped = ec[ip] * phi_a
                    else:
                        damped = (ec[ip] - eb_d[idx]) * inv_at
                    f = (g[ip] - t * damped) / b_d[idx]
                if ip == ik:
                    diag += (vk * jk[ik] * rot[ik] * f).real
                else:
                    acc = acc + jk[ip] * rot[ip] * f
            nondiag += (vk * acc).real
    free(g)
    diag_out[0] = diag
    nondiag_out[0] = nondiag


def spectrum_grid(t_grid, detuning_grid, bessel, double gamma_s, double gamma_filter,
                  double omega_f, double phi):
    """Re of the diagonal and non-diagonal double sums on a (t, detuning) grid."""
    cdef cnp.ndarray[double, ndim=1] tg = np.ascontiguousarray(t_grid, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] dg = np.ascontiguousarray(detuning_grid, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] jk = np.ascontiguousarray(bessel, dtype=np.float64)
    cdef int nk = jk.shape[0]
    cdef int kmax = (nk - 1) // 2
    cdef int nt = tg.shape[0], nd = dg.shape[0]
    cdef cnp.ndarray[double, ndim=2] diag = np.zeros((nt, nd))
    cdef cnp.ndarray[double, ndim=2] nondiag = np.zeros((nt, nd))
    cdef cnp.ndarray[double complex, ndim=1] rot = np.empty(nk, dtype=np.complex128)
    cdef cnp.ndarray[double complex, ndim=1] h_d = np.empty(4 * kmax + 1, dtype=np.complex128)
    cdef cnp.ndarray[double complex, ndim=1] b_d = np.empty(4 * kmax + 1, dtype=np.complex128)
    cdef cnp.ndarray[double complex, ndim=1] eb_d = np.empty(4 * kmax + 1, dtype=np.complex128)
    cdef int it, idl, i
    cdef double t, theta
    for i in range(4 * kmax + 1):
        b_d[i] = gamma_filter + 1j * ((i - 2 * kmax) * omega_f)
    for it in range(nt):
        t = tg[it]
        if t == 0.0:
            continue
        theta = phi + omega_f * t
        for i in range(nk):
            rot[i] = cexp_(1j * ((i - kmax) * theta))
        for i in range(4 * kmax + 1):
            h_d[i] = t * phi1(-b_d[i] * t)
            eb_d[i] = cexp_(-b_d[i] * t)
        with nogil:
            for idl in range(nd):
                _row(t, dg[idl], kmax, &jk[0], gamma_s, gamma_filter, omega_f,
                     &rot[0], &h_d[0], &b_d[0], &eb_d[0], &diag[it, idl],
                     &nondiag[it, idl])
    return diag, nondiag
