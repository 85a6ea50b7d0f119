"""Analytic limiting forms of the physical spectrum."""
from __future__ import annotations

import enum
import math

import numpy as np

from fluorospec.model import DotParams, DriveParams, FilterSettings
from fluorospec.numerics import DEFAULT_EPS_TRUNC, bessel_table

__all__ = [
    "LimitKind",
    "stationary_spectrum",
    "stationary_grid",
    "perfect_resolution_spectrum",
    "static_field_spectrum",
    "narrow_filter_finite_t",
]


class LimitKind(str, enum.Enum):
    STATIONARY = "stationary"
    PERFECT_RESOLUTION = "perfect_resolution"
    STATIC_FIELD = "static_field"
    NARROW_FILTER_FINITE_T = "narrow_filter_finite_t"


def stationary_grid(dot: DotParams, drive: DriveParams, gamma_filter: float, t_grid, detuning_grid,
                    eps_trunc: float = DEFAULT_EPS_TRUNC) -> tuple[np.ndarray, np.ndarray]:
    """Large-time spectrum split into its Lorentzian comb and oscillating part.

    The comb is ``(D0+1)/(2 pi) sum_k J_k^2 L_k`` with Lorentzians of half
    width ``Gs + G/2``; the oscillating part is the ``k != p`` sum
    ``(G/2pi)(D0+1) Re sum e^{i(p-k)(w t + phi)} J_k J_p / (C_p B_kp)``. Both
    arrays have shape ``(len(t_grid), len(detuning_grid))``. The result stays
    periodic in ``t`` with period ``2 pi / w``.
    """
    if not gamma_filter > 0:
        raise ValueError("gamma_filter must be positive")
    tg = np.atleast_1d(np.asarray(t_grid, dtype=float))
    dg = np.atleast_1d(np.asarray(detuning_grid, dtype=float))
    table = bessel_table(drive.m, eps_trunc)
    jk = table.symmetric()
    k = table.orders
    w = drive.omega_f
    width = dot.gamma_s + 0.5 * gamma_filter
    offset = dg[:, None] - k[None, :] * w
    comb = (dot.d0 + 1.0) / (2.0 * math.pi) * ((jk**2)[None, :] * width / (width**2 + offset**2)).sum(axis=1)

    diff = k[None, :] - k[:, None]  # p - k, rows k, columns p
    inv_b = 1.0 / (gamma_filter + 1j * diff * w)
    np.fill_diagonal(inv_b, 0.0)
    inv_c = 1.0 / (width + 1j * (k[None, :] * w - dg[:, None]))  # (nd, np)
    osc = np.empty((tg.size, dg.size))
    pref = gamma_filter * (dot.d0 + 1.0) / (2.0 * math.pi)
    for i, t in enumerate(tg):
        rot = np.exp(1j * k * (w * t + drive.phi))
        inner = (jk * np.conj(rot)) @ inv_b  # sum over k for each p
        osc[i] = pref * (inv_c @ (jk * rot * inner)).real
    return np.broadcast_to(comb, osc.shape).copy(), osc


def stationary_spectrum(dot: DotParams, drive: DriveParams, filt: FilterSettings, t: float,
                        eps_trunc: float = DEFAULT_EPS_TRUNC) -> float:
    """Asymptotic periodic attractor of the physical spectrum at time ``t``."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    comb, osc = stationary_grid(dot, drive, filt.gamma_filter, [t], [filt.detuning], eps_trunc)
    return float(comb[0, 0] + osc[0, 0])


def perfect_resolution_spectrum(dot: DotParams, drive: DriveParams, detuning, eps_trunc: float = DEFAULT_EPS_TRUNC):
    """Zero-width, infinite-time limit: Lorentzian comb of half width ``Gs``.

    Accepts a scalar or array detuning.
    """
    table = bessel_table(drive.m, eps_trunc)
    jk2 = table.symmetric() ** 2
    k = table.orders
    d = np.asarray(detuning, dtype=float)
    offset = d[..., None] - k * drive.omega_f
    gs = dot.gamma_s
    out = (dot.d0 + 1.0) / (2.0 * math.pi) * np.sum(jk2 * gs / (gs * gs + offset**2), axis=-1)
    return float(out) if out.ndim == 0 else out


def static_field_spectrum(dot: DotParams, delta_as: float, detuning):
    """Single Lorentzian at ``delta_as`` for a field held constant from the start."""
    d = np.asarray(detuning, dtype=float)
    gs = dot.gamma_s
    out = (dot.d0 + 1.0) / (2.0 * math.pi) * gs / (gs * gs + (d - delta_as) ** 2)
    return float(out) if out.ndim == 0 else out


def narrow_filter_finite_t(dot: DotParams, drive: DriveParams, t: float) -> float:
    """An infinitely narrow filter records nothing in finite time."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    return 0.0
