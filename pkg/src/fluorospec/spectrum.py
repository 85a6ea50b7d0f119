"""Closed-form time-dependent physical spectrum as a double Bessel series."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from fluorospec import _kernel_py, kernel
from fluorospec.model import DotParams, DriveParams, FilterSettings
from fluorospec.numerics import DEFAULT_EPS_TRUNC, bessel_table

__all__ = [
    "SeriesCoefficients",
    "SpectrumPoint",
    "SpectrumScan",
    "ScanError",
    "bracket_term",
    "physical_spectrum",
    "spectrum_scan",
    "DEFAULT_EPS_TRUNC",
]


@dataclass(frozen=True)
class SeriesCoefficients:
    """Rates entering the (k, p) bracket of the series.

    ``a_k = G/2 - Gs + i(D - k w)``, ``b_kp = G + i(p - k) w`` and
    ``c_p = G/2 + Gs + i(p w - D)``; by construction ``b_kp = a_k + c_p``.
    """

    k: int
    p: int
    a_k: complex
    b_kp: complex
    c_p: complex

    @classmethod
    def build(cls, k: int, p: int, dot: DotParams, drive: DriveParams,
              filt: FilterSettings) -> "SeriesCoefficients":
        half = 0.5 * filt.gamma_filter
        w = drive.omega_f
        delta = filt.detuning
        a = complex(half - dot.gamma_s, delta - k * w)
        b = complex(filt.gamma_filter, (p - k) * w)
        c = complex(half + dot.gamma_s, p * w - delta)
        scale = max(abs(a), abs(b), abs(c), 1.0)
        assert abs(b - (a + c)) <= 8 * np.finfo(float).eps * scale
        return cls(k, p, a, b, c)


def bracket_term(coef: SeriesCoefficients, t: float, gamma_filter: float) -> complex:
    """``e^{-G t} [(e^{B t} - e^{A t}) / (A C) - (e^{B t} - 1) / (A B)]``.

    Evaluated as ``e^{(B - G) t} F`` with the removable point ``A = 0``
    handled by a series in ``A t``; nothing with positive real exponent is
    formed, so large ``t`` is safe.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0.0:
        return 0j
    f = _kernel_py.bracket_f(coef.a_k, coef.b_kp, coef.c_p, t)
    rot = (coef.b_kp - gamma_filter) * t
    return complex(np.exp(rot)) * f


@dataclass(frozen=True)
class SpectrumPoint:
    t: float
    detuning: float
    value: float
    diag_part: float
    nondiag_part: float


class ScanError(ValueError):
    """A grid point could not be evaluated."""

    def __init__(self, message: str, t: float | None = None, detuning: float | None = None):
        where = []
        if t is not None:
            where.append(f"t={t!r}")
        if detuning is not None:
            where.append(f"detuning={detuning!r}")
        suffix = f" at {', '.join(where)}" if where else ""
        super().__init__(message + suffix)
        self.t = t
        self.detuning = detuning


def _check_inputs(dot: DotParams, drive: DriveParams, gamma_filter: float, eps_trunc: float):
    if not math.isfinite(gamma_filter) or gamma_filter <= 0:
        raise ValueError("gamma_filter must be positive; use narrow_filter_finite_t for the zero-width limit")
    if not 0.0 < eps_trunc < 1.0:
        raise ValueError("eps_trunc must lie in (0, 1)")


def _prefactor(dot: DotParams, gamma_filter: float) -> float:
    return gamma_filter * (dot.d0 + 1.0) / (2.0 * math.pi)


def physical_spectrum(dot: DotParams, drive: DriveParams, filt: FilterSettings, t: float,
                      eps_trunc: float = DEFAULT_EPS_TRUNC) -> SpectrumPoint:
    """Physical spectrum S(t, detuning, Gamma) of the driven, pumped dot.

    Parameters
    ----------
    dot, drive, filt
        Dot rates, drive parameters and filter width/detuning.
    t : float
        Elapsed time since the drive was switched on.
    eps_trunc : float
        Bessel mass ``2 sum_{|k|>K} J_k^2`` left out of the series.

    Returns
    -------
    SpectrumPoint
        Total value and its diagonal (k = p) and non-diagonal parts.
    """
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise ValueError("t must be finite and non-negative")
    _check_inputs(dot, drive, filt.gamma_filter, eps_trunc)
    table = bessel_table(drive.m, eps_trunc)
    diag, nondiag = kernel.spectrum_grid(
        np.array([t]), np.array([filt.detuning]), table.symmetric(),
        dot.gamma_s, filt.gamma_filter, drive.omega_f, drive.phi,
    )
    pref = _prefactor(dot, filt.gamma_filter)
    d_val = pref * float(diag[0, 0])
    n_val = pref * float(nondiag[0, 0])
    return SpectrumPoint(t, filt.detuning, d_val + n_val, d_val, n_val)


@dataclass
class SpectrumScan:
    """Spectrum values on a (t, detuning) grid, row-major over t.

    ``values``, ``diag`` and ``nondiag`` have shape ``(len(t_grid),
    len(detuning_grid))``. ``produced_by`` is ``"full"`` or a limit tag.
    """

    dot: DotParams
    drive: DriveParams | None
    gamma_filter: float
    eps_trunc: float
    t_grid: np.ndarray
    detuning_grid: np.ndarray
    values: np.ndarray
    diag: np.ndarray
    nondiag: np.ndarray
    produced_by: str = "full"
    extra: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def point(self, i: int, j: int) -> SpectrumPoint:
        return SpectrumPoint(float(self.t_grid[i]), float(self.detuning_grid[j]),
                             float(self.values[i, j]), float(self.diag[i, j]),
                             float(self.nondiag[i, j]))

    def metadata(self) -> dict:
        meta = {"produced_by": self.produced_by, "gamma_filter": self.gamma_filter,
                "eps_trunc": self.eps_trunc}
        meta.update({f"dot.{k}": v for k, v in asdict(self.dot).items()})
        if self.drive is not None:
            meta.update({f"drive.{k}": v for k, v in asdict(self.drive).items()})
        meta.update(self.extra)
        return meta


def _validate_grid(name: str, grid) -> np.ndarray:
    arr = np.asarray(grid, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(np.diff(arr) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    return arr


def spectrum_scan(dot: DotParams, drive: DriveParams, gamma_filter: float, t_grid, detuning_grid,
                  eps_trunc: float = DEFAULT_EPS_TRUNC, workers: int = 1) -> SpectrumScan:
    """Evaluate :func:`physical_spectrum` on every (t, detuning) pair.

    Rows (fixed t) may run on ``workers`` threads; each row is computed
    independently, so the result does not depend on scheduling.
    """
    tg = _validate_grid("t_grid", t_grid)
    dg = _validate_grid("detuning_grid", detuning_grid)
    if tg[0] < 0:
        raise ScanError("t must be non-negative", t=float(tg[0]))
    _check_inputs(dot, drive, gamma_filter, eps_trunc)
    table = bessel_table(drive.m, eps_trunc)
    jk = table.symmetric()

    def row(t):
        return kernel.spectrum_grid(np.array([t]), dg, jk, dot.gamma_s, gamma_filter,
                                    drive.omega_f, drive.phi)

    if workers > 1 and tg.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, tg))
    else:
        rows = [row(t) for t in tg]
    pref = _prefactor(dot, gamma_filter)
    diag = pref * np.vstack([r[0] for r in rows])
    nondiag = pref * np.vstack([r[1] for r in rows])
    values = diag + nondiag
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        i, j = bad[0]
        raise ScanError("non-finite spectrum value", t=float(tg[i]), detuning=float(dg[j]))
    return SpectrumScan(dot, drive, gamma_filter, eps_trunc, tg, dg, values, diag, nondiag,
                        extra={"bessel_max_order": table.max_order})
