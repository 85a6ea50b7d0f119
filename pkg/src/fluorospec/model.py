"""Parameter records, population inversion and the two-time dipole correlation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DotParams",
    "DriveParams",
    "FilterSettings",
    "dot_params_from_d0",
    "dot_params_from_rates",
    "population_inversion",
    "correlation",
]


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class DotParams:
    """Relaxation and pumping of the two-level dot.

    Attributes
    ----------
    gamma_s : float
        Transverse (dipole) relaxation rate.
    gamma_p : float
        Incoherent pump rate.
    d0 : float
        Stationary population inversion in ``[-1, 1]``.
    gamma_big_d : float
        Total inversion relaxation rate. Kept as its own field so that a
        longitudinal rate independent of ``gamma_s`` only changes a number.
    """

    gamma_s: float
    gamma_p: float
    d0: float
    gamma_big_d: float

    def __post_init__(self):
        for name in ("gamma_s", "gamma_p", "d0", "gamma_big_d"):
            _finite(name, getattr(self, name))
        if self.gamma_s <= 0:
            raise ValueError("gamma_s must be positive")
        if self.gamma_p < 0:
            raise ValueError("gamma_p must be non-negative")
        if not -1.0 <= self.d0 <= 1.0:
            raise ValueError(f"d0 must lie in [-1, 1], got {self.d0}")

    @property
    def population_weight(self) -> float:
        """Equal-time correlation (D0 + 1) / 2."""
        return 0.5 * (self.d0 + 1.0)


def dot_params_from_rates(gamma_s: float, gamma_p: float, gamma_d: float | None = None) -> DotParams:
    """Build :class:`DotParams` from the relaxation and pump rates.

    ``gamma_d`` defaults to ``2 * gamma_s``.
    """
    gamma_s = _finite("gamma_s", gamma_s)
    gamma_p = _finite("gamma_p", gamma_p)
    if gamma_s <= 0:
        raise ValueError("gamma_s must be positive")
    if gamma_p < 0:
        raise ValueError("gamma_p must be non-negative")
    gamma_d = 2.0 * gamma_s if gamma_d is None else _finite("gamma_d", gamma_d)
    # D0 = (tau_d - tau_p) / (tau_d + tau_p) written with rates
    d0 = (gamma_p - gamma_d) / (gamma_p + gamma_d)
    return DotParams(gamma_s, gamma_p, d0, gamma_d + gamma_p)


def dot_params_from_d0(gamma_s: float, d0: float) -> DotParams:
    """Solve the pump rate that produces the stationary inversion ``d0``.

    ``d0 = -1`` means no pumping; ``d0 = 1`` would need an infinite rate and
    is rejected.
    """
    gamma_s = _finite("gamma_s", gamma_s)
    d0 = _finite("d0", d0)
    if gamma_s <= 0:
        raise ValueError("gamma_s must be positive")
    if not -1.0 <= d0 <= 1.0:
        raise ValueError(f"d0 must lie in [-1, 1], got {d0}")
    if d0 == 1.0:
        raise ValueError("d0 = 1 requires an infinite pump rate")
    gamma_d = 2.0 * gamma_s
    gamma_p = gamma_d * (1.0 + d0) / (1.0 - d0)
    return DotParams(gamma_s, gamma_p, d0, gamma_d + gamma_p)


@dataclass(frozen=True)
class DriveParams:
    """Low-frequency drive: asymmetry coupling, angular frequency, phase."""

    delta_as: float
    omega_f: float
    phi: float = 0.0
    m: float = field(init=False)

    def __post_init__(self):
        _finite("delta_as", self.delta_as)
        _finite("omega_f", self.omega_f)
        _finite("phi", self.phi)
        if self.omega_f <= 0:
            raise ValueError("omega_f must be positive; use static_field_spectrum for a static field")
        object.__setattr__(self, "m", self.delta_as / self.omega_f)


@dataclass(frozen=True)
class FilterSettings:
    """Fabry-Perot filter: full transmission width and detuning from the dot line."""

    gamma_filter: float
    detuning: float = 0.0

    def __post_init__(self):
        _finite("gamma_filter", self.gamma_filter)
        _finite("detuning", self.detuning)
        if self.gamma_filter < 0:
            raise ValueError("gamma_filter must be non-negative")


def population_inversion(p: DotParams, d_init: float, t: float) -> float:
    """Mean inversion relaxing from ``d_init`` toward ``p.d0``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if not -1.0 <= d_init <= 1.0:
        raise ValueError("d_init must lie in [-1, 1]")
    return (d_init - p.d0) * math.exp(-p.gamma_big_d * t) + p.d0


def correlation(p: DotParams, d: DriveParams, t, tau):
    """Two-time correlation <S+(t) S-(t + tau)> of the slowly varying dipole.

    Assumes the dot sits at its stationary inversion. Broadcasts over array
    arguments.
    """
    t_arr = np.asarray(t, dtype=float)
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(t_arr < 0) or np.any(tau_arr < 0):
        raise ValueError("t and tau must be non-negative")
    wt = d.omega_f * t_arr + d.phi
    phase = d.m * (np.sin(wt + d.omega_f * tau_arr) - np.sin(wt))
    out = p.population_weight * np.exp(-p.gamma_s * tau_arr - 1j * phase)
    if out.ndim == 0:
        return complex(out)
    return out
