"""Time-dependent resonance fluorescence spectra of a pumped quantum dot under a
low-frequency drive.

The hot double-series kernel is compiled with Cython when available; set
``FLUOROSPEC_PURE_PYTHON=1`` to force the numpy fallback. ``kernel.BACKEND``
reports which one is active.
"""
from fluorospec.kernel import BACKEND
from fluorospec.limits import (LimitKind, narrow_filter_finite_t, perfect_resolution_spectrum,
                               static_field_spectrum, stationary_spectrum)
from fluorospec.model import (DotParams, DriveParams, FilterSettings, correlation,
                              dot_params_from_d0, dot_params_from_rates, population_inversion)
from fluorospec.numerics import DEFAULT_EPS_TRUNC, bessel_j, bessel_table
from fluorospec.spectrum import (ScanError, SpectrumPoint, SpectrumScan, physical_spectrum,
                                 spectrum_scan)

__all__ = [
    "BACKEND",
    "DEFAULT_EPS_TRUNC",
    "DotParams",
    "DriveParams",
    "FilterSettings",
    "LimitKind",
    "ScanError",
    "SpectrumPoint",
    "SpectrumScan",
    "bessel_j",
    "bessel_table",
    "correlation",
    "dot_params_from_d0",
    "dot_params_from_rates",
    "narrow_filter_finite_t",
    "perfect_resolution_spectrum",
    "physical_spectrum",
    "population_inversion",
    "spectrum_scan",
    "static_field_spectrum",
    "stationary_spectrum",
]
__version__ = "0.1.0"
