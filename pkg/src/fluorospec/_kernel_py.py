"""NumPy implementation of the double Bessel-series kernel.

Every bracket term of the closed form is evaluated as

    e^{i(p-k) w t} * F,   F = int_0^t e^{-B s} (e^{A s} - 1) / A ds
                           = t (phi1(-C t) - phi1(-B t)) / A,

with ``phi1(z) = (e^z - 1) / z`` and ``B = A + C``. The divided difference
cancels badly once ``|A|`` is small next to ``|B|``; there the equivalent split

    F = t (phi1(-C t) - e^{-C t} phi1(-A t)) / B

is used instead. Rows with ``|A t|`` below ``SING_THRESHOLD`` use a power
series in ``A t``. No exponential with a positive real part is ever formed.
"""
from __future__ import annotations

import math

import numpy as np

SING_THRESHOLD = 1e-3
SERIES_TERMS = 5
_MOMENT_SERIES_RADIUS = 2.0

BACKEND = "python"


def phi1(z):
    """(e^z - 1) / z with the removable point z = 0, elementwise."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    # complex expm1 without cancellation
    re = np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2
    im = np.exp(x) * np.sin(y)
    num = re + 1j * im
    small = z == 0
    out = np.where(small, 1.0 + 0j, num / np.where(small, 1.0, z))
    return out if out.ndim else complex(out)


def moments(z, jmax: int = SERIES_TERMS):
    """M_j(z) = int_0^1 u^j e^{z u} du for j = 0..jmax, stacked on axis 0."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((jmax + 1,) + z.shape, dtype=complex)
    near = np.abs(z) <= _MOMENT_SERIES_RADIUS
    # series: M_j = sum_i z^i / (i! (i + j + 1))
    zn = np.where(near, z, 0.0)
    for j in range(jmax + 1):
        term = np.ones_like(zn)
        acc = term / (j + 1)
        for i in range(1, 40):
            term = term * zn / i
            acc = acc + term / (i + j + 1)
        out[j] = acc
    # forward recurrence M_j = (e^z - j M_{j-1}) / z, stable for |z| > 2
    zf = np.where(near, 1.0, z)
    ez = np.exp(zf)
    prev = phi1(zf)
    far = ~near
    out[0] = np.where(far, prev, out[0])
    for j in range(1, jmax + 1):
        prev = (ez - j * prev) / zf
        out[j] = np.where(far, prev, out[j])
    return out


def f_direct(a, b, c, t):
    return t * (phi1(-c * t) - phi1(-b * t)) / a


def _damped_phi1(a, b, c, t):
    # e^{-C t} phi1(-A t), written as a difference once |A t| >= 1 so that a
    # growing e^{-A t} is never formed on its own
    at = np.asarray(a * t, dtype=complex)
    ec = np.exp(-np.asarray(c) * t)
    small = np.abs(at) < 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        near = ec * phi1(np.where(small, -at, 0.0))
        far = (ec - np.exp(-np.asarray(b) * t)) / np.where(small, 1.0, at)
    return np.where(small, near, far)


def f_split(a, b, c, t):
    """F without division by A; accurate when |A| < |B|."""
    return t * (phi1(-c * t) - _damped_phi1(a, b, c, t)) / b


def f_series(a, b, t):
    """F expanded in w = A t around A = 0 with B held fixed."""
    w = np.asarray(a * t, dtype=complex)
    mom = moments(-np.asarray(b) * t, SERIES_TERMS + 1)
    acc = np.zeros(np.broadcast(w, mom[0]).shape, dtype=complex)
    wn = np.ones_like(w)
    for n in range(SERIES_TERMS + 1):
        acc = acc + wn / math.factorial(n + 1) * mom[n + 1]
        wn = wn * w
    return t * t * acc


def bracket_f(a: complex, b: complex, c: complex, t: float) -> complex:
    """F for one (A, B, C) triple, choosing the branch by |A t|."""
    if t == 0.0:
        return 0j
    if abs(a) * t < SING_THRESHOLD:
        return complex(f_series(a, b, t))
    if abs(a) >= abs(b):
        return complex(f_direct(a, b, c, t))
    return complex(f_split(a, b, c, t))


def spectrum_grid(t_grid, detuning_grid, bessel, gamma_s, gamma_filter, omega_f, phi,
                  chunk: int = 32):
    """Re of the diagonal and non-diagonal double sums on a (t, detuning) grid.

    ``bessel`` holds J_k for k = -K..K. The prefactor Gamma (D0 + 1) / (2 pi)
    is applied by the caller.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    dgrid = np.asarray(detuning_grid, dtype=float)
    jk = np.asarray(bessel, dtype=float)
    nk = jk.size
    kmax = (nk - 1) // 2
    k = np.arange(-kmax, kmax + 1)
    dd = np.arange(-2 * kmax, 2 * kmax + 1)
    diff_idx = k[None, :] - k[:, None] + 2 * kmax  # p - k, shifted
    b_d = gamma_filter + 1j * dd * omega_f
    half = 0.5 * gamma_filter
    diag = np.zeros((t_grid.size, dgrid.size))
    nondiag = np.zeros((t_grid.size, dgrid.size))
    eye = np.eye(nk, dtype=bool)
    for it, t in enumerate(t_grid):
        if t == 0.0:
            continue
        theta = phi + omega_f * t
        rot = np.exp(1j * k * theta)
        weights = np.outer(jk * np.conj(rot), jk * rot)  # v_k u_p
        h_mat = (t * phi1(-b_d * t))[diff_idx]
        b_mat = b_d[diff_idx]
        eb_mat = np.exp(-b_d * t)[diff_idx]
        for lo in range(0, dgrid.size, chunk):
            delta = dgrid[lo:lo + chunk]
            a = half - gamma_s + 1j * (delta[:, None] - k[None, :] * omega_f)
            c = half + gamma_s + 1j * (k[None, :] * omega_f - delta[:, None])
            g = t * phi1(-c * t)
            ec = np.exp(-c * t)
            at = a * t
            small = np.abs(at) < 1.0
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                f = (g[:, None, :] - h_mat[None, :, :]) / a[:, :, None]
                phi_a = phi1(np.where(small, -at, 0.0))
                damped = np.where(small[:, :, None], ec[:, None, :] * phi_a[:, :, None],
                                  (ec[:, None, :] - eb_mat[None, :, :])
                                  / np.where(small, 1.0, at)[:, :, None])
            split = (g[:, None, :] - t * damped) / b_mat[None, :, :]
            f = np.where(np.abs(a)[:, :, None] >= np.abs(b_mat)[None, :, :], f, split)
            sing_i, sing_k = np.nonzero(np.abs(a) * t < SING_THRESHOLD)
            for i, kk in zip(sing_i, sing_k):
                f[i, kk, :] = f_series(a[i, kk], b_mat[kk, :], t)
            terms = (weights[None, :, :] * f).real
            diag[it, lo:lo + chunk] = terms[:, eye].sum(axis=1)
            terms[:, eye] = 0.0
            nondiag[it, lo:lo + chunk] = terms.sum(axis=(1, 2))
    return diag, nondiag
