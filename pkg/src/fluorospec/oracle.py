"""Brute-force validators for the closed-form spectrum.

Nothing here touches the Bessel series: the spectrum integrals are done by
nested composite Simpson over the analytic correlation function, and the
correlation itself is re-derived by integrating its regression ODE with RK4.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from fluorospec.model import DotParams, DriveParams, FilterSettings, correlation
from fluorospec.numerics import rk4_trajectory, simpson_weights

__all__ = [
    "OracleReport",
    "quadrature_spectrum",
    "quadrature_spectrum_direct",
    "quadrature_report",
    "converged_quadrature",
    "regression_ode_check",
    "finite_time_stationary_spectrum",
    "REL_FLOOR",
]

REL_FLOOR = 1e-12
_ROW_CHUNK = 256


@dataclass(frozen=True)
class OracleReport:
    closed_form: complex | float
    oracle_value: complex | float
    abs_err: float
    rel_err: float
    quadrature_nodes: int
    warnings: tuple[str, ...] = ()

    @classmethod
    def compare(cls, closed_form, oracle_value, nodes: int, notes=()) -> "OracleReport":
        abs_err = float(abs(closed_form - oracle_value))
        rel_err = abs_err / max(abs(oracle_value), REL_FLOOR)
        return cls(closed_form, oracle_value, abs_err, rel_err, nodes, tuple(notes))


def _resolution_note(drive: DriveParams, t: float, n: int) -> str | None:
    if n < 8.0 * drive.omega_f * t / math.pi:
        return (f"n={n} nodes may not resolve the drive oscillation over t={t} "
                f"(need n >= {8.0 * drive.omega_f * t / math.pi:.0f})")
    return None


def _check_n(n: int, minimum: int):
    if n < minimum or n % 2:
        raise ValueError(f"n must be even and >= {minimum}, got {n}")


def _triangle(integrand, t: float, n: int) -> tuple[complex, complex | None]:
    """Simpson over the triangle 0 <= t1 <= t, 0 <= tau <= t - t1.

    The inner variable is mapped to ``u = tau / (t - t1)`` so each outer node
    carries ``n`` inner intervals. ``integrand(t1, tau)`` gets 2-D arrays.
    Returns the estimate with ``n`` intervals and, when ``n % 4 == 0``, the
    one with ``n / 2`` taken from every other node of the same grid.
    """
    t1, w1 = simpson_weights(n, 0.0, t)
    u, wu = simpson_weights(n, 0.0, 1.0)
    nested = n % 4 == 0
    if nested:
        w1_half = simpson_weights(n // 2, 0.0, t)[1]
        wu_half = simpson_weights(n // 2, 0.0, 1.0)[1]
    fine = coarse = 0j
    for lo in range(0, t1.size, _ROW_CHUNK):
        rows = t1[lo:lo + _ROW_CHUNK, None]
        span = t - rows
        vals = integrand(rows, span * u[None, :]) * span
        fine += complex(w1[lo:lo + _ROW_CHUNK] @ (vals @ wu))
        if nested:
            half_rows = vals[::2, ::2] @ wu_half
            coarse += complex(w1_half[lo // 2:lo // 2 + half_rows.size] @ half_rows)
    return fine, (coarse if nested else None)


def quadrature_spectrum(dot: DotParams, drive: DriveParams, filt: FilterSettings, t: float,
                        n: int = 1024) -> float:
    """Physical spectrum from its defining double integral over the correlation.

    ``(G/pi) Re int_0^t dt1 e^{-G(t-t1)} int_0^{t-t1} dtau e^{(G/2 + i D) tau} <S+(t1) S-(t1+tau)>``
    by nested Simpson with ``n`` outer and ``n`` inner intervals.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    _check_n(n, 64)
    note = _resolution_note(drive, t, n)
    if note:
        warnings.warn(note, RuntimeWarning, stacklevel=2)
    g = filt.gamma_filter
    s = complex(0.5 * g, filt.detuning)

    def integrand(t1, tau):
        return np.exp(-g * (t - t1) + s * tau) * correlation(dot, drive, t1, tau)

    return g / math.pi * _triangle(integrand, t, n)[0].real


def quadrature_spectrum_direct(dot: DotParams, drive: DriveParams, filt: FilterSettings, t: float,
                               n: int = 1024) -> float:
    """Physical spectrum from the symmetric two-time form over ``[0, t]^2``.

    The square is split on its diagonal; the lower half uses
    ``<S+(t1) S-(t2)> = conj(<S+(t2) S-(t1)>)`` for ``t2 < t1``. Agreement with
    :func:`quadrature_spectrum` checks the reduction to the one-sided form.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    _check_n(n, 64)
    g = filt.gamma_filter
    delta = filt.detuning

    def filt_in(t_in):
        return np.exp(-(0.5 * g + 1j * delta) * (t - t_in))

    def upper(t1, tau):  # t2 = t1 + tau >= t1
        return np.conj(filt_in(t1)) * filt_in(t1 + tau) * correlation(dot, drive, t1, tau)

    def lower(t2, tau):  # t1 = t2 + tau > t2
        return np.conj(filt_in(t2 + tau)) * filt_in(t2) * np.conj(correlation(dot, drive, t2, tau))

    total = _triangle(upper, t, n)[0] + _triangle(lower, t, n)[0]
    return g / (2.0 * math.pi) * total.real


def converged_quadrature(dot: DotParams, drive: DriveParams, filt: FilterSettings, t: float,
                         n_start: int = 256, n_max: int = 4096,
                         target: float = 1e-8) -> tuple[float, int, float]:
    """Double ``n`` until ``|Q_{n/2} - Q_n| / |Q_n| < target`` or ``n_max``.

    Both levels come from one grid evaluation. Returns ``(Q_n, n,
    self_convergence)``.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    _check_n(n_start, 64)
    if n_start % 4:
        raise ValueError("n_start must be a multiple of 4")
    g = filt.gamma_filter
    s = complex(0.5 * g, filt.detuning)

    def integrand(t1, tau):
        return np.exp(-g * (t - t1) + s * tau) * correlation(dot, drive, t1, tau)

    n = n_start
    while True:
        fine, coarse = _triangle(integrand, t, n)
        q_n = g / math.pi * fine.real
        q_half = g / math.pi * coarse.real
        self_conv = abs(q_half - q_n) / max(abs(q_n), REL_FLOOR)
        if self_conv < target or n >= n_max:
            return q_n, n, self_conv
        n *= 2


def quadrature_report(closed_form: float, dot: DotParams, drive: DriveParams, filt: FilterSettings,
                      t: float, n_start: int = 256, n_max: int = 4096,
                      target: float = 1e-8) -> tuple[OracleReport, float]:
    """Compare a closed-form value with the self-converged quadrature.

    Returns the report and the final self-convergence ``|Q_{n/2} - Q_n| / |Q_n|``.
    """
    q, n, self_conv = converged_quadrature(dot, drive, filt, t, n_start, n_max, target)
    notes = []
    note = _resolution_note(drive, t, n)
    if note:
        notes.append(note)
    if self_conv >= target:
        notes.append(f"not self-converged at n={n}: {self_conv:.2e}")
    return OracleReport.compare(closed_form, q, n, notes), self_conv


def regression_ode_check(dot: DotParams, drive: DriveParams, t: float, tau_max: float,
                         steps: int = 10_000) -> OracleReport:
    """Integrate the regression equation in tau with RK4 and compare.

    ``d/dtau C = -(Gs + i delta cos(w (t + tau) + phi)) C`` from
    ``C(0) = (D0 + 1) / 2``. The report holds the grid point with the largest
    relative deviation from :func:`fluorospec.model.correlation`.
    """
    if steps < 100:
        raise ValueError("steps must be >= 100")
    if t < 0 or tau_max <= 0:
        raise ValueError("need t >= 0 and tau_max > 0")
    gs, dl, w, ph = dot.gamma_s, drive.delta_as, drive.omega_f, drive.phi

    def rhs(tau, y):
        return -(gs + 1j * dl * math.cos(w * (t + tau) + ph)) * y

    taus, ys = rk4_trajectory(rhs, dot.population_weight, 0.0, tau_max, steps)
    exact = correlation(dot, drive, t, taus)
    if dot.population_weight == 0.0:
        return OracleReport.compare(0j, complex(ys[-1]), steps)
    rel = np.abs(ys - exact) / np.maximum(np.abs(exact), REL_FLOOR)
    i = int(np.argmax(rel))
    return OracleReport.compare(complex(exact[i]), complex(ys[i]), steps)


def finite_time_stationary_spectrum(dot: DotParams, drive: DriveParams, detuning: float, T: float,
                                    n: int = 2048, tau_cut: float | None = None) -> float:
    """Spectrum defined through a finite integration time ``T``.

    ``(1 / (pi T)) Re int_0^T dt' int_0^{T-t'} dtau <S+(t') S-(t'+tau)> e^{i D tau}``.
    The inner range stops at ``tau_cut`` (default ``50 / Gs``, where the
    correlation is below ``e^{-50}`` of its initial value).
    """
    if T <= 0:
        raise ValueError("T must be positive")
    _check_n(n, 2)
    if tau_cut is None:
        tau_cut = 50.0 / dot.gamma_s
    t1, w1 = simpson_weights(n, 0.0, T)
    u, wu = simpson_weights(n, 0.0, 1.0)
    total = 0j
    for lo in range(0, t1.size, _ROW_CHUNK):
        rows = t1[lo:lo + _ROW_CHUNK, None]
        span = np.minimum(T - rows, tau_cut)
        tau = span * u[None, :]
        vals = correlation(dot, drive, rows, tau) * np.exp(1j * detuning * tau) * span
        total += complex(w1[lo:lo + _ROW_CHUNK] @ (vals @ wu))
    return total.real / (math.pi * T)
